use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::rational::{int, rank, solve, Rational};
use crate::lattice::{cokernel, Cokernel, IntMatrix, RationalVector};
use crate::rootdata::cartan::{
    candidate_types, cartan_matrix, match_up_to_permutation, CartanType, Isogeny, Series,
};

pub type IntVector = Vec<i64>;

/// Based root datum `(X, R, Δ, X̌, Ř, Δ̌)` with `X = X̌ = Z^rank` and the dot
/// product as pairing. `coroots[i]` is the coroot of `roots[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasedRootDatum {
    rank: usize,
    roots: Vec<IntVector>,
    coroots: Vec<IntVector>,
    simple: Vec<usize>,
    reduced: bool,
    index: HashMap<IntVector, usize>,
}

pub fn pair(x: &[i64], y: &[i64]) -> i64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

impl BasedRootDatum {
    /// Assembles a datum without validating it; see [`BasedRootDatum::validate`].
    pub fn new(
        rank: usize,
        roots: Vec<IntVector>,
        coroots: Vec<IntVector>,
        simple: Vec<usize>,
        reduced: bool,
    ) -> Self {
        let index = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();
        Self {
            rank,
            roots,
            coroots,
            simple,
            reduced,
            index,
        }
    }

    /// Builds a split datum from a Cartan matrix `a[i][j] = <coroot_i, root_j>`.
    ///
    /// Simply connected data use the fundamental weight basis of `X`, adjoint
    /// data the simple root basis.
    pub fn from_cartan(a: &[Vec<i64>], isogeny: Isogeny) -> Self {
        let l = a.len();
        let unit = |i: usize| {
            let mut v = vec![0; l];
            v[i] = 1;
            v
        };
        let (simple_roots, simple_coroots): (Vec<IntVector>, Vec<IntVector>) = match isogeny {
            Isogeny::SimplyConnected => (0..l)
                .map(|j| ((0..l).map(|i| a[i][j]).collect(), unit(j)))
                .unzip(),
            Isogeny::Adjoint => (0..l).map(|j| (unit(j), a[j].clone())).unzip(),
        };
        Self::closure(l, &simple_roots, &simple_coroots)
    }

    /// Root system generated from simple (root, coroot) pairs by reflections.
    /// Positive roots come first ordered by height, then their negatives.
    pub fn closure(rank: usize, simple_roots: &[IntVector], simple_coroots: &[IntVector]) -> Self {
        let l = simple_roots.len();
        let mut pairs: Vec<(IntVector, IntVector)> = simple_roots
            .iter()
            .cloned()
            .zip(simple_coroots.iter().cloned())
            .collect();
        let mut seen: HashMap<IntVector, usize> = pairs
            .iter()
            .enumerate()
            .map(|(i, (r, _))| (r.clone(), i))
            .collect();
        let mut queue: VecDeque<usize> = (0..l).collect();
        while let Some(k) = queue.pop_front() {
            for i in 0..l {
                let (a, ac) = &pairs[k];
                let c = pair(a, &simple_coroots[i]);
                let d = pair(&simple_roots[i], ac);
                let r: IntVector = a
                    .iter()
                    .zip(&simple_roots[i])
                    .map(|(x, s)| x - c * s)
                    .collect();
                let rc: IntVector = ac
                    .iter()
                    .zip(&simple_coroots[i])
                    .map(|(x, s)| x - d * s)
                    .collect();
                if !seen.contains_key(&r) {
                    seen.insert(r.clone(), pairs.len());
                    pairs.push((r, rc));
                    queue.push_back(pairs.len() - 1);
                }
            }
        }
        // Sort positives by (height, coordinates); negatives follow in the same order.
        let coords = simple_coordinates(simple_roots, rank);
        let mut keyed: Vec<(Vec<Rational>, IntVector, IntVector)> = pairs
            .into_iter()
            .map(|(r, c)| (coords(&r).expect("root in the span of the simple roots"), r, c))
            .collect();
        keyed.retain(|(k, _, _)| k.iter().all(|x| !x.is_negative()));
        keyed.sort_by(|(a, _, _), (b, _, _)| {
            let ha: Rational = a.iter().sum();
            let hb: Rational = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let positives: Vec<(IntVector, IntVector)> =
            keyed.into_iter().map(|(_, r, c)| (r, c)).collect();
        let negatives: Vec<(IntVector, IntVector)> = positives
            .iter()
            .map(|(r, c)| (neg(r), neg(c)))
            .collect();
        let (roots, coroots): (Vec<_>, Vec<_>) = positives.into_iter().chain(negatives).unzip();
        let index: HashMap<IntVector, usize> = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();
        let simple = simple_roots.iter().map(|s| index[s]).collect();
        let reduced = !roots
            .iter()
            .any(|r| index.contains_key(&r.iter().map(|x| 2 * x).collect::<Vec<_>>()));
        Self {
            rank,
            roots,
            coroots,
            simple,
            reduced,
            index,
        }
    }

    /// Direct sum of data (coordinates concatenated).
    pub fn direct_sum(parts: &[BasedRootDatum]) -> Self {
        let rank = parts.iter().map(|p| p.rank).sum();
        let mut roots = Vec::new();
        let mut coroots = Vec::new();
        let mut simple = Vec::new();
        let mut offset = 0;
        for p in parts {
            let embed = |v: &IntVector| {
                let mut w = vec![0; rank];
                w[offset..offset + p.rank].copy_from_slice(v);
                w
            };
            let base = roots.len();
            simple.extend(p.simple.iter().map(|s| s + base));
            roots.extend(p.roots.iter().map(embed));
            coroots.extend(p.coroots.iter().map(embed));
            offset += p.rank;
        }
        let reduced = parts.iter().all(|p| p.reduced);
        Self::new(rank, roots, coroots, simple, reduced)
    }

    /// Rank `n` torus: no roots.
    pub fn torus(n: usize) -> Self {
        Self::new(n, Vec::new(), Vec::new(), Vec::new(), true)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn roots(&self) -> &[IntVector] {
        &self.roots
    }

    pub fn coroots(&self) -> &[IntVector] {
        &self.coroots
    }

    pub fn simple_indices(&self) -> &[usize] {
        &self.simple
    }

    pub fn num_simple(&self) -> usize {
        self.simple.len()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn set_reduced_flag(&mut self, reduced: bool) {
        self.reduced = reduced;
    }

    pub fn root_index(&self, r: &[i64]) -> Option<usize> {
        self.index.get(r).copied()
    }

    pub fn simple_root(&self, i: usize) -> &IntVector {
        &self.roots[self.simple[i]]
    }

    pub fn simple_coroot(&self, i: usize) -> &IntVector {
        &self.coroots[self.simple[i]]
    }

    pub fn simple_roots(&self) -> Vec<IntVector> {
        self.simple.iter().map(|&s| self.roots[s].clone()).collect()
    }

    pub fn simple_coroots(&self) -> Vec<IntVector> {
        self.simple.iter().map(|&s| self.coroots[s].clone()).collect()
    }

    pub fn is_semisimple(&self) -> bool {
        self.simple.len() == self.rank
    }

    /// `a[i][j] = <coroot_i, root_j>` on the simple roots.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let l = self.simple.len();
        (0..l)
            .map(|i| {
                (0..l)
                    .map(|j| pair(self.simple_root(j), self.simple_coroot(i)))
                    .collect()
            })
            .collect()
    }

    /// `s_k(x) = x - <x, coroot_k> root_k` for the root with index `k`.
    pub fn reflect(&self, k: usize, x: &[i64]) -> IntVector {
        let c = pair(x, &self.coroots[k]);
        x.iter().zip(&self.roots[k]).map(|(a, r)| a - c * r).collect()
    }

    /// Dual reflection on `X̌`.
    pub fn reflect_dual(&self, k: usize, y: &[i64]) -> IntVector {
        let c = pair(&self.roots[k], y);
        y.iter().zip(&self.coroots[k]).map(|(a, r)| a - c * r).collect()
    }

    /// Matrix of the simple reflection `s_i` on `X` (acting on column vectors).
    pub fn simple_reflection_matrix(&self, i: usize) -> IntMatrix {
        let k = self.simple[i];
        let cols: Vec<IntVector> = (0..self.rank)
            .map(|j| {
                let mut e = vec![0; self.rank];
                e[j] = 1;
                self.reflect(k, &e)
            })
            .collect();
        IntMatrix::from_columns(self.rank, &cols)
    }

    /// Coordinates of a vector of `X ⊗ Q` in the basis `Δ`, if it lies in their span.
    pub fn root_coordinates(&self, x: &[i64]) -> Option<Vec<Rational>> {
        simple_coordinates(&self.simple_roots(), self.rank)(x)
    }

    /// Coordinates of a vector of `X̌ ⊗ Q` in the basis `Δ̌`.
    pub fn coroot_coordinates(&self, y: &[i64]) -> Option<Vec<Rational>> {
        simple_coordinates(&self.simple_coroots(), self.rank)(y)
    }

    pub fn positive_root_indices(&self) -> Vec<usize> {
        (0..self.roots.len())
            .filter(|&i| {
                self.root_coordinates(&self.roots[i])
                    .is_some_and(|c| c.iter().all(|x| !x.is_negative()))
            })
            .collect()
    }

    /// Connected components of the Dynkin diagram, as lists of simple indices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let a = self.cartan_matrix();
        let l = a.len();
        let mut comp = vec![usize::MAX; l];
        let mut out = Vec::new();
        for s in 0..l {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut k = 0;
            while k < members.len() {
                let i = members[k];
                for j in 0..l {
                    if comp[j] == usize::MAX && a[i][j] != 0 {
                        comp[j] = id;
                        members.push(j);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_irreducible(&self) -> bool {
        self.components().len() == 1
    }

    /// Matrix whose columns span the root lattice `Q` (the simple roots).
    pub fn root_lattice_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.rank, &self.simple_roots())
    }

    /// `X / Q`: torsion part and free rank.
    pub fn fundamental_group(&self) -> Cokernel {
        cokernel(&self.root_lattice_matrix())
    }

    /// Highest coroot of an irreducible datum and its marks in `Δ̌`.
    pub fn highest_coroot(&self) -> Result<HighestCoroot> {
        if !self.is_irreducible() || self.simple.is_empty() {
            return Err(Error::NotIrreducible);
        }
        let coords: Vec<Vec<Rational>> = self
            .coroots
            .iter()
            .map(|c| self.coroot_coordinates(c))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::InvalidDatum("coroot outside the span of the simple coroots".into()))?;
        let height = |v: &Vec<Rational>| v.iter().sum::<Rational>();
        let best = (0..coords.len())
            .max_by(|&a, &b| height(&coords[a]).cmp(&height(&coords[b])).then(b.cmp(&a)))
            .expect("irreducible datum has roots");
        let dominant = coords.iter().all(|c| {
            c.iter()
                .zip(&coords[best])
                .all(|(x, top)| !(top - x).is_negative())
        });
        if !dominant {
            return Err(Error::InvalidDatum(
                "coroot system has no highest element".into(),
            ));
        }
        Ok(HighestCoroot {
            root_index: best,
            coroot: self.coroots[best].clone(),
            marks: RationalVector::new(coords[best].clone()),
        })
    }

    /// `h = 1 + Σ n_i` over the marks of the highest coroot.
    pub fn coxeter_number(&self) -> Result<Rational> {
        let hc = self.highest_coroot()?;
        Ok(Rational::one() + hc.marks.coords().iter().sum::<Rational>())
    }

    /// Names each irreducible component by matching Cartan matrices.
    pub fn identify_type(&self) -> Result<Vec<CartanType>> {
        let a = self.cartan_matrix();
        let mut out = Vec::new();
        for comp in self.components() {
            let sub: Vec<Vec<i64>> = comp
                .iter()
                .map(|&i| comp.iter().map(|&j| a[i][j]).collect())
                .collect();
            let n = comp.len();
            let non_reduced = comp.iter().any(|&i| {
                let twice: IntVector = self.simple_root(i).iter().map(|x| 2 * x).collect();
                self.index.contains_key(&twice)
            }) || self.component_is_non_reduced(&comp);
            if non_reduced {
                out.push(CartanType {
                    series: Series::BC,
                    rank: n,
                    twist: 1,
                });
                continue;
            }
            let candidates = candidate_types(n);
            let exact = candidates.iter().find(|t| t.cartan_matrix() == sub);
            let found = exact.cloned().or_else(|| {
                candidates
                    .iter()
                    .find(|t| match_up_to_permutation(&sub, &t.cartan_matrix()).is_some())
                    .cloned()
            });
            match found {
                Some(t) => out.push(t),
                None => return Err(Error::Unrecognized(sub)),
            }
        }
        Ok(out)
    }

    fn component_is_non_reduced(&self, comp: &[usize]) -> bool {
        // Roots supported on this component that are twice another root.
        let others: Vec<usize> = (0..self.simple.len()).filter(|i| !comp.contains(i)).collect();
        self.roots.iter().any(|r| {
            let twice: IntVector = r.iter().map(|x| 2 * x).collect();
            self.index.contains_key(&twice)
                && self.root_coordinates(r).is_some_and(|c| {
                    others.iter().all(|&o| c[o].is_zero())
                })
        })
    }

    /// Checks every axiom; the first violation is reported with a witness.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let n = self.rank;
        if self.roots.len() != self.coroots.len() {
            return Err(Violation::new(
                "shape",
                format!(
                    "{} roots but {} coroots",
                    self.roots.len(),
                    self.coroots.len()
                ),
                vec![],
            ));
        }
        for (i, (r, c)) in self.roots.iter().zip(&self.coroots).enumerate() {
            if r.len() != n || c.len() != n {
                return Err(Violation::new("shape", format!("vector length != rank {n}"), vec![i]));
            }
            if r.iter().all(|&x| x == 0) {
                return Err(Violation::new("zero_root", "zero root".into(), vec![i]));
            }
        }
        if self.index.len() != self.roots.len() {
            return Err(Violation::new("duplicate", "duplicate roots".into(), vec![]));
        }
        for (i, (r, c)) in self.roots.iter().zip(&self.coroots).enumerate() {
            let p = pair(r, c);
            if p != 2 {
                return Err(Violation::new(
                    "pairing",
                    format!("<alpha, alpha^vee> = {p} for root {i}"),
                    vec![i],
                ));
            }
        }
        let coroot_index: HashMap<&IntVector, usize> =
            self.coroots.iter().enumerate().map(|(i, c)| (c, i)).collect();
        for k in 0..self.roots.len() {
            for j in 0..self.roots.len() {
                let r = self.reflect(k, &self.roots[j]);
                if !self.index.contains_key(&r) {
                    return Err(Violation::new(
                        "reflection",
                        format!("s_{k} maps root {j} outside R"),
                        vec![k, j],
                    ));
                }
                let c = self.reflect_dual(k, &self.coroots[j]);
                if !coroot_index.contains_key(&c) {
                    return Err(Violation::new(
                        "dual_reflection",
                        format!("dual s_{k} maps coroot {j} outside the coroots"),
                        vec![k, j],
                    ));
                }
            }
        }
        if let Some(&s) = self.simple.iter().find(|&&s| s >= self.roots.len()) {
            return Err(Violation::new("simple", "simple index out of range".into(), vec![s]));
        }
        let simple_rows: Vec<Vec<Rational>> = (0..n)
            .map(|i| self.simple.iter().map(|&s| int(self.roots[s][i])).collect())
            .collect();
        if rank(&simple_rows) != self.simple.len() {
            return Err(Violation::new(
                "basis",
                "simple roots are linearly dependent".into(),
                self.simple.clone(),
            ));
        }
        for (i, r) in self.roots.iter().enumerate() {
            let ok = self.root_coordinates(r).is_some_and(|c| {
                c.iter().all(Rational::is_integer)
                    && (c.iter().all(|x| !x.is_negative()) || c.iter().all(|x| !x.is_positive()))
            });
            if !ok {
                return Err(Violation::new(
                    "basis",
                    format!("root {i} is not a same-sign integer combination of the simple roots"),
                    vec![i],
                ));
            }
        }
        if self.reduced {
            for (i, r) in self.roots.iter().enumerate() {
                let twice: IntVector = r.iter().map(|x| 2 * x).collect();
                if let Some(&j) = self.index.get(&twice) {
                    return Err(Violation::new(
                        "reduced",
                        format!("root {j} is twice root {i} but the datum is flagged reduced"),
                        vec![i, j],
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> DatumJson {
        DatumJson {
            rank: self.rank,
            roots: self.roots.clone(),
            coroots: self.coroots.clone(),
            simple: self.simple.clone(),
            bijection: (0..self.roots.len()).collect(),
            reduced: self.reduced,
        }
    }

    pub fn from_json(j: &DatumJson) -> Result<Self> {
        let m = j.roots.len();
        if j.bijection.len() != m || j.coroots.len() != m {
            return Err(Error::InvalidDatum("bijection length mismatch".into()));
        }
        let mut seen = vec![false; m];
        for &b in &j.bijection {
            if b >= m || std::mem::replace(&mut seen[b], true) {
                return Err(Error::InvalidDatum("bijection is not a permutation".into()));
            }
        }
        let coroots = j.bijection.iter().map(|&b| j.coroots[b].clone()).collect();
        Ok(Self::new(j.rank, j.roots.clone(), coroots, j.simple.clone(), j.reduced))
    }
}

fn neg(v: &[i64]) -> IntVector {
    v.iter().map(|x| -x).collect()
}

/// Coordinates in the basis given by the (independent) columns `basis`;
/// `None` when the vector is outside their span.
fn simple_coordinates(
    basis: &[IntVector],
    rank: usize,
) -> impl Fn(&[i64]) -> Option<Vec<Rational>> {
    let m: Vec<Vec<Rational>> = (0..rank)
        .map(|i| basis.iter().map(|b| int(b[i])).collect())
        .collect();
    move |x: &[i64]| {
        let b: Vec<Rational> = x.iter().map(|&v| int(v)).collect();
        solve(&m, &b)
    }
}

impl Serialize for BasedRootDatum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BasedRootDatum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = DatumJson::deserialize(d)?;
        Self::from_json(&j).map_err(serde::de::Error::custom)
    }
}

/// Wire form of a based root datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumJson {
    pub rank: usize,
    pub roots: Vec<IntVector>,
    pub coroots: Vec<IntVector>,
    pub simple: Vec<usize>,
    /// `bijection[i]` is the index in `coroots` of the coroot of `roots[i]`.
    pub bijection: Vec<usize>,
    pub reduced: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HighestCoroot {
    pub root_index: usize,
    pub coroot: IntVector,
    pub marks: RationalVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: String,
    pub message: String,
    pub witness: Vec<usize>,
}

impl Violation {
    fn new(kind: &str, message: String, witness: Vec<usize>) -> Self {
        Self {
            kind: kind.into(),
            message,
            witness,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

/// Split datum of the given type.
pub fn build_datum(t: &CartanType, isogeny: Isogeny) -> Result<BasedRootDatum> {
    if t.is_twisted() {
        return Err(Error::Parse(format!(
            "{t} is twisted; build {} and fold it",
            t.untwisted()
        )));
    }
    if t.series == Series::BC {
        return Err(Error::Parse("BC data only arise from folding".into()));
    }
    let t = CartanType::new(t.series, t.rank)?;
    Ok(BasedRootDatum::from_cartan(
        &cartan_matrix(t.series, t.rank),
        isogeny,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::rat;

    fn sc(label: &str) -> BasedRootDatum {
        build_datum(&label.parse().unwrap(), Isogeny::SimplyConnected).unwrap()
    }

    #[test]
    fn a1_adjoint() {
        let d = build_datum(&"A1".parse().unwrap(), Isogeny::Adjoint).unwrap();
        assert_eq!(d.rank(), 1);
        assert_eq!(d.simple_root(0), &vec![1]);
        assert_eq!(d.simple_coroot(0), &vec![2]);
        assert!(d.validate().is_ok());
    }

    #[test]
    fn root_counts() {
        for (label, count) in [
            ("A1", 2),
            ("A4", 20),
            ("B3", 18),
            ("C4", 32),
            ("D5", 40),
            ("E6", 72),
            ("E7", 126),
            ("E8", 240),
            ("F4", 48),
            ("G2", 12),
        ] {
            let d = sc(label);
            assert_eq!(d.roots().len(), count, "{label}");
            assert!(d.validate().is_ok(), "{label}");
            assert!(d.is_reduced());
            assert_eq!(d.simple_indices(), (0..d.rank()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn fundamental_groups() {
        let fac = |l: &str| sc(l).fundamental_group().torsion.factors_u64();
        assert_eq!(fac("A2"), vec![3]);
        assert_eq!(fac("D4"), vec![2, 2]);
        assert_eq!(fac("B3"), vec![2]);
        assert!(fac("G2").is_empty());
        let adj = build_datum(&"E6".parse().unwrap(), Isogeny::Adjoint).unwrap();
        assert!(adj.fundamental_group().torsion.is_trivial());
    }

    #[test]
    fn negated_coroot_is_reported() {
        let d = sc("A2");
        let mut j = d.to_json();
        j.coroots[1] = j.coroots[1].iter().map(|x| -x).collect();
        let bad = BasedRootDatum::from_json(&j).unwrap();
        let v = bad.validate().unwrap_err();
        assert_eq!(v.kind, "pairing");
        assert!(v.message.contains("= -2"), "{v}");
        assert_eq!(v.witness, vec![1]);
    }

    #[test]
    fn highest_coroot_marks() {
        let marks = |l: &str| sc(l).highest_coroot().unwrap().marks.into_coords();
        assert_eq!(marks("A1"), vec![rat(1, 1)]);
        assert_eq!(marks("A2"), vec![rat(1, 1), rat(1, 1)]);
        // Highest coroot of C3 is the highest root of the dual B3.
        assert_eq!(marks("C3"), vec![rat(1, 1), rat(2, 1), rat(2, 1)]);
        assert_eq!(
            marks("E7"),
            [2, 2, 3, 4, 3, 2, 1].map(|x| rat(x, 1)).to_vec()
        );
    }

    #[test]
    fn coxeter_numbers() {
        for (label, h) in [
            ("A1", 2),
            ("A5", 6),
            ("B4", 8),
            ("C5", 10),
            ("D6", 10),
            ("E6", 12),
            ("E7", 18),
            ("E8", 30),
            ("F4", 12),
            ("G2", 6),
        ] {
            assert_eq!(sc(label).coxeter_number().unwrap(), rat(h, 1), "{label}");
        }
    }

    #[test]
    fn reducible_data_are_rejected_by_component_operations() {
        let d = BasedRootDatum::direct_sum(&[sc("A1"), sc("A2")]);
        assert!(d.validate().is_ok());
        assert_eq!(d.components(), vec![vec![0], vec![1, 2]]);
        assert!(matches!(d.highest_coroot(), Err(Error::NotIrreducible)));
        let t = d.identify_type().unwrap();
        assert_eq!(
            t.iter().map(ToString::to_string).collect::<Vec<_>>(),
            vec!["A1", "A2"]
        );
    }

    #[test]
    fn torus_factor_is_free() {
        let d = BasedRootDatum::direct_sum(&[sc("A1"), BasedRootDatum::torus(1)]);
        assert!(d.validate().is_ok());
        assert!(!d.is_semisimple());
        let g = d.fundamental_group();
        assert_eq!(g.free_rank, 1);
        assert_eq!(g.torsion.factors_u64(), vec![2]);
    }

    #[test]
    fn identify_round_trip() {
        for label in ["A3", "B2", "C2", "B5", "C3", "D3", "D4", "E6", "F4", "G2"] {
            let t = sc(label).identify_type().unwrap();
            assert_eq!(t.len(), 1);
            assert_eq!(t[0].to_string(), label);
        }
    }

    #[test]
    fn json_round_trip() {
        let d = sc("B2");
        let s = serde_json::to_string(&d).unwrap();
        let back: BasedRootDatum = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn invalid_ranks() {
        for (s, r) in [(Series::E, 5), (Series::D, 2), (Series::G, 3)] {
            assert!(matches!(
                CartanType::new(s, r),
                Err(Error::InvalidRank { .. })
            ));
        }
    }
}
