//! Weighted projective spaces and anticanonical linear systems.
//!
//! A lattice point `m` of the polar of `nabla` corresponds to the monomial
//! `prod_rho x_rho^(<m, u_rho> + 1)`; a set of such points spans a linear
//! system. This module provides that dictionary, Fletcher's root/pointer
//! criterion for quasismoothness, and the Gorenstein and divisibility checks.
//!
//! The root/pointer criterion is sufficient for quasismoothness of the
//! generic member; it is also necessary only for the complete linear system
//! on a weighted projective space. [`is_quasismooth`] reports the criterion.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::linalg::{hnf, small, IntMatrix};
use crate::vector::IntVector;

/// Weights `(a_0, ..., a_n)` of `P(a_0 : ... : a_n)`: positive, gcd 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct WeightSystem(Vec<i64>);

impl WeightSystem {
    pub fn new(weights: Vec<i64>) -> Result<Self> {
        let g = weights.iter().fold(0i64, |g, w| g.gcd(w));
        if weights.len() < 2 || weights.iter().any(|&w| w <= 0) || g != 1 {
            return Err(Error::InvalidWeights(weights));
        }
        Ok(WeightSystem(weights))
    }

    pub fn weights(&self) -> &[i64] {
        &self.0
    }

    /// Anticanonical degree `a_0 + ... + a_n`.
    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every weight divides the degree.
    pub fn is_gorenstein(&self) -> bool {
        let d = self.degree();
        self.0.iter().all(|a| d % a == 0)
    }
}

impl TryFrom<Vec<i64>> for WeightSystem {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        WeightSystem::new(v)
    }
}

impl From<WeightSystem> for Vec<i64> {
    fn from(w: WeightSystem) -> Self {
        w.0
    }
}

impl FromStr for WeightSystem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let ws = s
            .split(|c: char| c == ',' || c == ':' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<i64>().map_err(|_| Error::Parse {
                    line: 1,
                    message: format!("bad weight {t:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        WeightSystem::new(ws)
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|w| w.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn is_gorenstein(w: &WeightSystem) -> bool {
    w.is_gorenstein()
}

/// Images of the standard basis vectors of `Z^(n+1)` in
/// `N = Z^(n+1) / Z (a_0, ..., a_n)`, in a basis of `N` obtained from a
/// unimodular completion of the weight vector. They satisfy
/// `sum a_i v_i = 0` and need not be primitive.
pub fn wps_ray_images(w: &WeightSystem) -> Vec<IntVector> {
    let a = w.weights();
    let col: Vec<Vec<i64>> = a.iter().map(|&x| vec![x]).collect();
    let (h, u) = hnf(&IntMatrix::from_rows(&col));
    debug_assert_eq!(h.row_i64(0), Some(vec![1]));
    let u = u.to_i64_rows().expect("weights completion fits in i64");
    let n = a.len() - 1;
    (0..=n)
        .map(|j| IntVector::new((1..=n).map(|i| u[i][j]).collect()))
        .collect()
}

/// Fan of `P(a_0 : ... : a_n)`: rays are the primitive generators of the
/// images of the standard basis, maximal cones all `n`-subsets.
pub fn wps_fan(w: &WeightSystem) -> Result<Fan> {
    let rays = wps_ray_images(w)
        .into_iter()
        .map(|v| v.primitive())
        .collect::<Result<Vec<_>>>()?;
    let k = rays.len();
    let cones = (0..k)
        .map(|skip| (0..k).filter(|&i| i != skip).collect())
        .collect();
    Fan::new(rays, cones)
}

/// Exponents `<m, u_rho> + 1` of the monomial attached to a lattice point,
/// indexed like the rays of the context fan.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(pub Vec<i64>);

impl ExponentVector {
    /// Bitmask of variables with positive exponent.
    pub fn support(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0, |m, (i, _)| m | 1 << i)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

pub fn exponents(m: &IntVector, fan: &Fan) -> Result<ExponentVector> {
    let e: Vec<i64> = fan.rays().iter().map(|u| m.dot(u) + 1).collect();
    if e.iter().any(|&x| x < 0) {
        return Err(Error::NotAnticanonicalPoint(m.clone()));
    }
    Ok(ExponentVector(e))
}

/// Inverse of [`exponents`].
pub fn point_of_exponents(e: &ExponentVector, fan: &Fan) -> Result<IntVector> {
    let rays = fan.rays();
    let bad = || Error::NotAnticanonicalMonomial(e.0.clone());
    if e.0.len() != rays.len() || e.0.iter().any(|&x| x < 0) {
        return Err(bad());
    }
    let d = fan.rank();
    // Pick d independent rays and solve <m, u_i> = e_i - 1 on them.
    let mut basis: Vec<usize> = Vec::with_capacity(d);
    for i in 0..rays.len() {
        let mut trial: Vec<&IntVector> = basis.iter().map(|&j| &rays[j]).collect();
        trial.push(&rays[i]);
        if small::rank(&trial) > basis.len() {
            basis.push(i);
            if basis.len() == d {
                break;
            }
        }
    }
    if basis.len() < d {
        return Err(Error::RaysNotSpanning);
    }
    // Columns of the system matrix are coordinates: A[i][j] = rays[basis[i]][j].
    let cols: Vec<IntVector> = (0..d)
        .map(|j| IntVector::new(basis.iter().map(|&i| rays[i][j]).collect()))
        .collect();
    let rhs = IntVector::new(basis.iter().map(|&i| e.0[i] - 1).collect());
    let col_refs: Vec<&IntVector> = cols.iter().collect();
    let (num, den) = small::solve_columns(&col_refs, &rhs).ok_or_else(bad)?;
    if num.iter().any(|x| x % den != 0) {
        return Err(bad());
    }
    let m = IntVector::new(num.iter().map(|x| x / den).collect());
    if exponents(&m, fan).ok().as_ref() != Some(e) {
        return Err(bad());
    }
    Ok(m)
}

/// A finite set of lattice points in the polar of `nabla` of a context fan.
#[derive(Clone, Debug)]
pub struct MonomialSet {
    points: Vec<IntVector>,
    fan: Fan,
}

impl MonomialSet {
    pub fn new(fan: &Fan, points: impl IntoIterator<Item = IntVector>) -> Result<Self> {
        let mut points: Vec<IntVector> = points.into_iter().collect();
        points.sort();
        points.dedup();
        for m in &points {
            if m.rank() != fan.rank() {
                return Err(Error::RankMismatch {
                    expected: fan.rank(),
                    found: m.rank(),
                });
            }
            let (p, _) = fan.min_pairing(m);
            if p < -1 {
                return Err(Error::NotAnticanonicalPoint(m.clone()));
            }
        }
        Ok(MonomialSet {
            points,
            fan: fan.clone(),
        })
    }

    pub fn points(&self) -> &[IntVector] {
        &self.points
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn exponent_vectors(&self) -> Vec<ExponentVector> {
        self.points
            .iter()
            .map(|m| exponents(m, &self.fan).expect("validated on construction"))
            .collect()
    }
}

/// The complete anticanonical linear system of a complete fan.
pub fn anticanonical_points(fan: &Fan) -> Result<MonomialSet> {
    let pts = fan.nabla()?.polar_lattice_points()?;
    MonomialSet::new(fan, pts)
}

/// Outcome of the root/pointer criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasismoothVerdict {
    pub satisfied: bool,
    /// First subset `I` (ray indices, in increasing bitmask order) with
    /// neither an `I`-root nor an `I`-pointer.
    pub violating: Option<Vec<usize>>,
}

/// Fletcher's criterion: for every nonempty subset `I` of the variables the
/// system contains an `I`-root (support inside `I`) or an `I`-pointer
/// (support inside `I` plus one `j` outside `I`, with exponent of `x_j` one).
pub fn is_quasismooth(xi: &MonomialSet) -> QuasismoothVerdict {
    let nvars = xi.fan().rays().len();
    assert!(nvars < 64, "too many variables for the subset loop");
    let monos: Vec<(u64, Vec<i64>)> = xi
        .exponent_vectors()
        .into_iter()
        .map(|e| (e.support(), e.0))
        .collect();
    for mask in 1u64..(1u64 << nvars) {
        let ok = monos.iter().any(|(supp, e)| {
            let outside = supp & !mask;
            outside == 0 || (outside.count_ones() == 1 && e[outside.trailing_zeros() as usize] == 1)
        });
        if !ok {
            let violating = (0..nvars).filter(|i| mask >> i & 1 == 1).collect();
            return QuasismoothVerdict {
                satisfied: false,
                violating: Some(violating),
            };
        }
    }
    QuasismoothVerdict {
        satisfied: true,
        violating: None,
    }
}

/// A variable dividing every monomial of the system, if there is one.
pub fn common_variable(xi: &MonomialSet) -> Option<usize> {
    let exps = xi.exponent_vectors();
    (0..xi.fan().rays().len()).find(|&i| exps.iter().all(|e| e.0[i] > 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iv;

    fn ws(v: &[i64]) -> WeightSystem {
        WeightSystem::new(v.to_vec()).unwrap()
    }

    /// Number of nonnegative solutions of sum a_i e_i = d.
    fn count_monomials(a: &[i64], d: i64) -> usize {
        match a.split_first() {
            None => usize::from(d == 0),
            Some((&w, rest)) => (0..=d / w).map(|k| count_monomials(rest, d - k * w)).sum(),
        }
    }

    #[test]
    fn weight_validation() {
        assert!(WeightSystem::new(vec![2, 4, 6]).is_err());
        assert!(WeightSystem::new(vec![1, 0, 1]).is_err());
        assert_eq!(
            "1,1,2,2".parse::<WeightSystem>().unwrap(),
            ws(&[1, 1, 2, 2])
        );
        assert_eq!(
            "(2:3:3:4)".parse::<WeightSystem>().unwrap(),
            ws(&[2, 3, 3, 4])
        );
    }

    #[test]
    fn wps_relations() {
        for w in [
            vec![1, 1, 1, 1],
            vec![1, 1, 2, 2],
            vec![2, 3, 3, 4],
            vec![1, 6, 14, 21],
        ] {
            let w = ws(&w);
            let imgs = wps_ray_images(&w);
            let mut sum = IntVector::zeros(3);
            for (a, v) in w.weights().iter().zip(&imgs) {
                sum = &sum + &v.scale(*a);
            }
            assert!(sum.is_zero());
            let fan = wps_fan(&w).unwrap();
            assert!(fan.is_complete().unwrap());
            assert!(fan.is_simplicial().unwrap());
            assert_eq!(fan.rays().len(), 4);
        }
    }

    #[test]
    fn anticanonical_counts() {
        assert_eq!(
            anticanonical_points(&Fan::projective_space(3))
                .unwrap()
                .len(),
            35
        );
        assert_eq!(
            anticanonical_points(&Fan::projective_space(4))
                .unwrap()
                .len(),
            126
        );
        let w = ws(&[1, 1, 1, 3]);
        let n = anticanonical_points(&wps_fan(&w).unwrap()).unwrap().len();
        assert_eq!(n, count_monomials(&[1, 1, 1, 3], 6));
    }

    #[test]
    fn dictionary_examples() {
        let p3 = Fan::projective_space(3);
        assert_eq!(
            exponents(&iv![-1, -1, -1], &p3).unwrap().0,
            vec![0, 0, 0, 4]
        );
        assert_eq!(exponents(&iv![0, 0, 0], &p3).unwrap().0, vec![1, 1, 1, 1]);
        assert_eq!(exponents(&iv![2, -1, 0], &p3).unwrap().0, vec![3, 0, 1, 0]);
        assert_eq!(
            point_of_exponents(&ExponentVector(vec![3, 0, 1, 0]), &p3).unwrap(),
            iv![2, -1, 0]
        );
        assert!(matches!(
            point_of_exponents(&ExponentVector(vec![3, 0, 1, 1]), &p3),
            Err(Error::NotAnticanonicalMonomial(_))
        ));
        assert!(exponents(&iv![-2, 0, 0], &p3).is_err());
    }

    #[test]
    fn fletcher_examples() {
        let p3 = Fan::projective_space(3);
        let full = anticanonical_points(&p3).unwrap();
        assert!(is_quasismooth(&full).satisfied);
        let only = MonomialSet::new(&p3, [iv![0, 0, 0]]).unwrap();
        let v = is_quasismooth(&only);
        assert!(!v.satisfied);
        assert_eq!(v.violating, Some(vec![0]));
    }

    #[test]
    fn gorenstein_examples() {
        assert!(ws(&[1, 6, 14, 21]).is_gorenstein());
        assert!(!ws(&[3, 3, 4, 5]).is_gorenstein());
        assert!(ws(&[1, 1, 1, 1]).is_gorenstein());
    }

    #[test]
    fn common_variable_examples() {
        let p3 = Fan::projective_space(3);
        let only = MonomialSet::new(&p3, [iv![0, 0, 0]]).unwrap();
        assert!(common_variable(&only).is_some());
        assert_eq!(common_variable(&anticanonical_points(&p3).unwrap()), None);
        let d0 = MonomialSet::new(
            &p3,
            [
                iv![-1, -1, -1],
                iv![1, 0, 0],
                iv![0, 1, 0],
                iv![0, 0, 1],
                iv![0, 0, 0],
            ],
        )
        .unwrap();
        assert_eq!(common_variable(&d0), None);
    }

    #[test]
    fn monomial_set_rejects_outside_points() {
        let p3 = Fan::projective_space(3);
        assert!(matches!(
            MonomialSet::new(&p3, [iv![-2, 0, 0]]),
            Err(Error::NotAnticanonicalPoint(_))
        ));
    }
}
