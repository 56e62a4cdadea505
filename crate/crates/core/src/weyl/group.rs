use std::collections::{HashMap, VecDeque};

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::rational::{int, solve, Rational};
use crate::lattice::IntMatrix;
use crate::rootdata::{pair, BasedRootDatum, IntVector};

/// Default bound on the number of Weyl group elements enumerated.
pub const DEFAULT_WEYL_CAP: usize = 10_000_000;

/// Element of `W` acting on `X`. `word = [i1, .., ik]` means
/// `matrix = s_i1 * s_i2 * ... * s_ik`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylElement {
    pub matrix: IntMatrix,
    pub word: Vec<usize>,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        Self {
            matrix: IntMatrix::identity(rank),
            word: Vec::new(),
        }
    }

    pub fn from_word(datum: &BasedRootDatum, word: &[usize]) -> Self {
        let matrix = word
            .iter()
            .fold(IntMatrix::identity(datum.rank()), |m, &i| {
                &m * &datum.simple_reflection_matrix(i)
            });
        Self {
            matrix,
            word: word.to_vec(),
        }
    }

    /// Recovers a reduced word from the matrix by descending a regular
    /// dominant vector back to the dominant chamber.
    pub fn from_matrix(datum: &BasedRootDatum, matrix: IntMatrix) -> Self {
        let seed = regular_dominant(datum);
        let mut mu = to_i64(&matrix.mul_vec_i64(&seed));
        let mut descents = Vec::new();
        while let Some(j) = (0..datum.num_simple())
            .find(|&j| pair(&mu, datum.simple_coroot(j)) < 0)
        {
            mu = datum.reflect(datum.simple_indices()[j], &mu);
            descents.push(j);
        }
        // s_jk ... s_j1 w = 1 on the regular vector, so w = s_j1 ... s_jk.
        Self {
            matrix,
            word: descents,
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        Self {
            matrix: &self.matrix * &other.matrix,
            word,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            matrix: self
                .matrix
                .unimodular_inverse()
                .expect("Weyl element is unimodular"),
            word: self.word.iter().rev().copied().collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    pub fn preserves_roots(&self, datum: &BasedRootDatum) -> bool {
        datum
            .roots()
            .iter()
            .all(|r| datum.root_index(&to_i64(&self.matrix.mul_vec_i64(r))).is_some())
    }
}

pub(crate) fn to_i64(v: &[num_bigint::BigInt]) -> IntVector {
    v.iter()
        .map(|x| x.to_i64().expect("coordinate fits in i64"))
        .collect()
}

/// Integral vector with `<x, coroot_i> > 0` for every simple coroot; its
/// `W`-orbit is in bijection with `W`.
pub fn regular_dominant(datum: &BasedRootDatum) -> IntVector {
    let n = datum.rank();
    let l = datum.num_simple();
    if l == 0 {
        return vec![0; n];
    }
    let m: Vec<Vec<Rational>> = (0..l)
        .map(|i| datum.simple_coroot(i).iter().map(|&c| int(c)).collect())
        .collect();
    let x = solve(&m, &vec![int(1); l]).expect("simple coroots are independent");
    let den = x
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, q| {
            num_integer::Integer::lcm(&acc, q.denom())
        });
    x.iter()
        .map(|q| (q * Rational::from_integer(den.clone())).to_integer().to_i64().unwrap())
        .collect()
}

/// All of `W` by breadth-first search on words, deduplicated by matrix.
/// Words are of minimal length.
pub fn generate_weyl(datum: &BasedRootDatum, cap: usize) -> Result<Vec<WeylElement>> {
    let n = datum.rank();
    let gens: Vec<Vec<i64>> = (0..datum.num_simple())
        .map(|i| flat_i64(&datum.simple_reflection_matrix(i)))
        .collect();
    let id = flat_i64(&IntMatrix::identity(n));
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::from([(id.clone(), 0)]);
    let mut elems: Vec<(Vec<i64>, Vec<usize>)> = vec![(id, Vec::new())];
    let mut queue = VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        for (i, g) in gens.iter().enumerate() {
            let m = mul_flat(&elems[k].0, g, n);
            if seen.contains_key(&m) {
                continue;
            }
            if elems.len() >= cap {
                return Err(Error::CapExceeded {
                    cap,
                    count: elems.len(),
                });
            }
            let mut word = elems[k].1.clone();
            word.push(i);
            seen.insert(m.clone(), elems.len());
            elems.push((m, word));
            queue.push_back(elems.len() - 1);
        }
    }
    Ok(elems
        .into_iter()
        .map(|(m, word)| WeylElement {
            matrix: unflat(&m, n),
            word,
        })
        .collect())
}

/// Visits every element of `W` once without storing the group, by walking
/// the orbit of a regular dominant vector: the parent of a non-dominant `μ` is
/// `s_j μ` for the least `j` with `<μ, coroot_j> < 0`.
///
/// The visitor receives the word of `w` (in the convention of
/// [`WeylElement`]) and `w(seed)`. Returns the number of elements visited.
pub fn walk_weyl<F>(datum: &BasedRootDatum, seed: &[i64], cap: usize, mut visit: F) -> Result<usize>
where
    F: FnMut(&[usize], &[i64]),
{
    let l = datum.num_simple();
    let simple_roots = datum.simple_roots();
    let simple_coroots = datum.simple_coroots();
    assert!(
        (0..l).all(|i| pair(seed, &simple_coroots[i]) > 0),
        "seed must be regular dominant"
    );
    // Stack frames: (w(seed), next simple index to try).
    let mut word: Vec<usize> = Vec::new();
    let mut stack: Vec<(IntVector, usize)> = vec![(seed.to_vec(), 0)];
    let mut count = 1usize;
    visit(&word, seed);
    while let Some((mu, next)) = stack.last_mut() {
        let mut found = None;
        while *next < l {
            let i = *next;
            *next += 1;
            let c = pair(mu, &simple_coroots[i]);
            if c <= 0 {
                continue;
            }
            let child: IntVector = mu
                .iter()
                .zip(&simple_roots[i])
                .map(|(x, a)| x - c * a)
                .collect();
            if (0..i).all(|j| pair(&child, &simple_coroots[j]) >= 0) {
                found = Some((i, child));
                break;
            }
        }
        match found {
            Some((i, child)) => {
                count += 1;
                if count > cap {
                    return Err(Error::CapExceeded {
                        cap,
                        count: count - 1,
                    });
                }
                // child = s_i w(seed), so its word is [i] followed by w's word.
                word.insert(0, i);
                visit(&word, &child);
                stack.push((child, 0));
            }
            None => {
                stack.pop();
                if !stack.is_empty() {
                    word.remove(0);
                }
            }
        }
    }
    Ok(count)
}

/// `|W|` via [`walk_weyl`].
pub fn weyl_order(datum: &BasedRootDatum, cap: usize) -> Result<usize> {
    let seed = regular_dominant(datum);
    walk_weyl(datum, &seed, cap, |_, _| {})
}

fn flat_i64(m: &IntMatrix) -> Vec<i64> {
    m.to_i64_rows().expect("small entries").concat()
}

fn mul_flat(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * b[k * n + j];
            }
        }
    }
    out
}

fn unflat(m: &[i64], n: usize) -> IntMatrix {
    let rows: Vec<Vec<i64>> = m.chunks(n).map(<[i64]>::to_vec).collect();
    if n == 0 {
        return IntMatrix::zeros(0, 0);
    }
    IntMatrix::from_rows(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{build_datum, Isogeny};

    fn sc(label: &str) -> BasedRootDatum {
        build_datum(&label.parse().unwrap(), Isogeny::SimplyConnected).unwrap()
    }

    #[test]
    fn small_orders() {
        assert_eq!(generate_weyl(&sc("A1"), 100).unwrap().len(), 2);
        assert_eq!(generate_weyl(&sc("A2"), 100).unwrap().len(), 6);
        for n in 1..=5 {
            let d = sc(&format!("A{n}"));
            let fact: usize = (1..=n + 1).product();
            assert_eq!(weyl_order(&d, DEFAULT_WEYL_CAP).unwrap(), fact);
        }
    }

    #[test]
    fn f4_order_two_orderings_agree() {
        let d = sc("F4");
        let bfs = generate_weyl(&d, DEFAULT_WEYL_CAP).unwrap();
        assert_eq!(bfs.len(), 1152);
        // Same group with the simple roots listed in reverse.
        let rev: Vec<usize> = (0..4).rev().collect();
        let sr: Vec<_> = rev.iter().map(|&i| d.simple_root(i).clone()).collect();
        let sc_: Vec<_> = rev.iter().map(|&i| d.simple_coroot(i).clone()).collect();
        let d2 = BasedRootDatum::closure(4, &sr, &sc_);
        assert_eq!(generate_weyl(&d2, DEFAULT_WEYL_CAP).unwrap().len(), 1152);
        assert_eq!(weyl_order(&d, DEFAULT_WEYL_CAP).unwrap(), 1152);
    }

    #[test]
    fn cap_is_enforced() {
        let d = sc("B3");
        assert!(matches!(
            generate_weyl(&d, 10),
            Err(Error::CapExceeded { cap: 10, .. })
        ));
        assert!(matches!(
            weyl_order(&d, 10),
            Err(Error::CapExceeded { cap: 10, .. })
        ));
    }

    #[test]
    fn words_match_matrices_and_preserve_roots() {
        let d = sc("B3");
        for w in generate_weyl(&d, 1000).unwrap() {
            assert_eq!(WeylElement::from_word(&d, &w.word).matrix, w.matrix);
            assert!(w.preserves_roots(&d));
            let recovered = WeylElement::from_matrix(&d, w.matrix.clone());
            assert_eq!(recovered.word.len(), w.word.len());
            assert_eq!(WeylElement::from_word(&d, &recovered.word).matrix, w.matrix);
        }
    }

    #[test]
    fn walk_words_reproduce_orbit_points() {
        let d = sc("G2");
        let seed = regular_dominant(&d);
        let mut seen = std::collections::HashSet::new();
        walk_weyl(&d, &seed, 100, |word, mu| {
            let w = WeylElement::from_word(&d, word);
            assert_eq!(to_i64(&w.matrix.mul_vec_i64(&seed)), mu);
            assert!(seen.insert(mu.to_vec()));
        })
        .unwrap();
        assert_eq!(seen.len(), 12);
    }
}
