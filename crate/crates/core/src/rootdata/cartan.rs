use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    /// Non-reduced; only produced by folding.
    BC,
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Series::A => "A",
            Series::B => "B",
            Series::C => "C",
            Series::D => "D",
            Series::E => "E",
            Series::F => "F",
            Series::G => "G",
            Series::BC => "BC",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Isogeny {
    #[serde(rename = "sc")]
    SimplyConnected,
    #[serde(rename = "adjoint")]
    Adjoint,
}

impl FromStr for Isogeny {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sc" | "simply_connected" | "simply-connected" => Ok(Isogeny::SimplyConnected),
            "adjoint" | "ad" => Ok(Isogeny::Adjoint),
            _ => Err(Error::Parse(format!("unknown isogeny {s:?}"))),
        }
    }
}

impl fmt::Display for Isogeny {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Isogeny::SimplyConnected => "sc",
            Isogeny::Adjoint => "adjoint",
        })
    }
}

/// Cartan type label such as `A3`, `2A5` or `3D4`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanType {
    pub series: Series,
    pub rank: usize,
    /// Order of the diagram twist; 1 for split types.
    pub twist: u8,
}

impl CartanType {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let t = Self {
            series,
            rank,
            twist: 1,
        };
        t.check_rank()?;
        Ok(t)
    }

    pub fn twisted(series: Series, rank: usize, twist: u8) -> Result<Self> {
        let t = Self {
            series,
            rank,
            twist,
        };
        t.check_rank()?;
        if twist != 1 {
            t.twist_permutation()?;
        }
        Ok(t)
    }

    pub fn untwisted(&self) -> Self {
        Self {
            twist: 1,
            ..self.clone()
        }
    }

    pub fn is_twisted(&self) -> bool {
        self.twist != 1
    }

    fn check_rank(&self) -> Result<()> {
        let r = self.rank;
        let ok = match self.series {
            Series::A | Series::BC => r >= 1,
            Series::B | Series::C => r >= 2,
            Series::D => r >= 3,
            Series::E => (6..=8).contains(&r),
            Series::F => r == 4,
            Series::G => r == 2,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidRank {
                series: self.series.to_string(),
                rank: r,
            })
        }
    }

    /// Permutation of the simple roots (0-based, Bourbaki order) realizing the
    /// twist.
    pub fn twist_permutation(&self) -> Result<Vec<usize>> {
        let n = self.rank;
        let bad = || {
            Error::Parse(format!(
                "no diagram automorphism of order {} on {}{}",
                self.twist, self.series, self.rank
            ))
        };
        match (self.twist, self.series) {
            (1, _) => Ok((0..n).collect()),
            (2, Series::A) if n >= 2 => Ok((0..n).map(|i| n - 1 - i).collect()),
            (2, Series::D) => {
                let mut p: Vec<usize> = (0..n).collect();
                p.swap(n - 2, n - 1);
                Ok(p)
            }
            (3, Series::D) if n == 4 => Ok(vec![2, 1, 3, 0]),
            (2, Series::E) if n == 6 => Ok(vec![5, 1, 4, 3, 2, 0]),
            _ => Err(bad()),
        }
    }

    /// Cartan matrix `a[i][j] = <coroot_i, root_j>` in Bourbaki numbering.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        cartan_matrix(self.series, self.rank)
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twist != 1 {
            write!(f, "{}", self.twist)?;
        }
        write!(f, "{}{}", self.series, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad Cartan type {s:?}"));
        let s = s.trim();
        let digits_end = s.find(|c: char| !c.is_ascii_digit()).ok_or_else(bad)?;
        let twist: u8 = if digits_end == 0 {
            1
        } else {
            s[..digits_end].parse().map_err(|_| bad())?
        };
        let rest = &s[digits_end..];
        let letters_end = rest
            .find(|c: char| c.is_ascii_digit())
            .ok_or_else(bad)?;
        let series = match rest[..letters_end].to_ascii_uppercase().as_str() {
            "A" => Series::A,
            "B" => Series::B,
            "C" => Series::C,
            "D" => Series::D,
            "E" => Series::E,
            "F" => Series::F,
            "G" => Series::G,
            "BC" => Series::BC,
            _ => return Err(bad()),
        };
        let rank: usize = rest[letters_end..].parse().map_err(|_| bad())?;
        Self::twisted(series, rank, twist)
    }
}

pub(crate) fn cartan_matrix(series: Series, n: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
        a[i][j] = aij;
        a[j][i] = aji;
    };
    match series {
        Series::A | Series::BC => {
            for i in 0..n.saturating_sub(1) {
                link(i, i + 1, -1, -1);
            }
            if series == Series::BC && n >= 2 {
                // Shape of the reduced B_n part; only used for display.
                link(n - 2, n - 1, -1, -2);
            }
        }
        Series::B => {
            for i in 0..n - 2 {
                link(i, i + 1, -1, -1);
            }
            // alpha_n short: <coroot_{n-1}, alpha_n> = -1, <coroot_n, alpha_{n-1}> = -2
            link(n - 2, n - 1, -1, -2);
        }
        Series::C => {
            for i in 0..n - 2 {
                link(i, i + 1, -1, -1);
            }
            link(n - 2, n - 1, -2, -1);
        }
        Series::D => {
            for i in 0..n - 2 {
                link(i, i + 1, -1, -1);
            }
            link(n - 3, n - 1, -1, -1);
        }
        Series::E => {
            // 1-3-4-5-..., 2 attached to 4
            link(0, 2, -1, -1);
            link(1, 3, -1, -1);
            for i in 2..n - 1 {
                link(i, i + 1, -1, -1);
            }
        }
        Series::F => {
            link(0, 1, -1, -1);
            link(1, 2, -2, -1);
            link(2, 3, -1, -1);
        }
        Series::G => {
            // alpha_1 short
            link(0, 1, -1, -3);
        }
    }
    a
}

/// Reference types tried, in order, when naming a Cartan matrix of rank `n`.
pub(crate) fn candidate_types(n: usize) -> Vec<CartanType> {
    [
        Series::A,
        Series::B,
        Series::C,
        Series::D,
        Series::E,
        Series::F,
        Series::G,
    ]
    .into_iter()
    .filter_map(|s| CartanType::new(s, n).ok())
    .collect()
}

/// Finds `p` with `target[p[i]][p[j]] == a[i][j]` by backtracking.
pub(crate) fn match_up_to_permutation(a: &[Vec<i64>], target: &[Vec<i64>]) -> Option<Vec<usize>> {
    let n = a.len();
    if target.len() != n {
        return None;
    }
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        k: usize,
        a: &[Vec<i64>],
        t: &[Vec<i64>],
        perm: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let n = a.len();
        if k == n {
            return true;
        }
        for c in 0..n {
            if used[c] {
                continue;
            }
            let consistent = (0..k).all(|j| a[k][j] == t[c][perm[j]] && a[j][k] == t[perm[j]][c]);
            if !consistent {
                continue;
            }
            perm[k] = c;
            used[c] = true;
            if go(k + 1, a, t, perm, used) {
                return true;
            }
            used[c] = false;
        }
        false
    }
    go(0, a, target, &mut perm, &mut used).then_some(perm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_labels() {
        let t: CartanType = "2A5".parse().unwrap();
        assert_eq!((t.series, t.rank, t.twist), (Series::A, 5, 2));
        assert_eq!(t.to_string(), "2A5");
        let t: CartanType = "E6".parse().unwrap();
        assert_eq!((t.series, t.rank, t.twist), (Series::E, 6, 1));
        assert!("3D5".parse::<CartanType>().is_err());
        assert!("E9".parse::<CartanType>().is_err());
        assert!("B1".parse::<CartanType>().is_err());
        assert!("Q3".parse::<CartanType>().is_err());
    }

    #[test]
    fn twist_permutations_preserve_cartan_matrix() {
        for label in ["2A2", "2A3", "2A6", "2D4", "2D5", "3D4", "2E6"] {
            let t: CartanType = label.parse().unwrap();
            let a = t.cartan_matrix();
            let p = t.twist_permutation().unwrap();
            for i in 0..t.rank {
                for j in 0..t.rank {
                    assert_eq!(a[p[i]][p[j]], a[i][j], "{label}");
                }
            }
        }
    }

    #[test]
    fn b2_and_c2_agree_up_to_relabeling() {
        let b2 = cartan_matrix(Series::B, 2);
        let c2 = cartan_matrix(Series::C, 2);
        assert_ne!(b2, c2);
        assert_eq!(match_up_to_permutation(&b2, &c2), Some(vec![1, 0]));
    }
}
