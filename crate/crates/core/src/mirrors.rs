//! Resolution polytopes, equivalence witnesses and the ray/monomial data of
//! Clarke and Berglund-Hübsch-Krawitz mirrors.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::linalg::{cokernel_of_columns, small};
use crate::linear_systems::{point_of_exponents, wps_fan, ExponentVector, WeightSystem};
use crate::polytope::{convex_hull, LatticePolytope};
use crate::vector::IntVector;

/// `Conv(Conv(xi)° ∩ N)`.
pub fn resolution_polytope(xi: &[IntVector]) -> Result<LatticePolytope> {
    let hull = convex_hull(xi)?;
    if !hull.is_full_dimensional() {
        return Err(Error::NotFullDimensional);
    }
    hull.polar_lattice_hull()
}

/// A pairing `<m, u>` recorded as evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pairing {
    pub m: IntVector,
    pub u: IntVector,
    pub value: i64,
}

/// Evidence that one fan's `nabla` sits between `xi` and the common polytope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Containment {
    /// Smallest pairing between a point of `xi` and a ray; at least -1.
    pub weakest_xi_pairing: Pairing,
    /// Smallest pairing between a facet normal of the common polytope
    /// (in `M`) and a ray, shifted by the facet offset; at least 0.
    pub weakest_facet_slack: Pairing,
}

#[derive(Clone, Debug)]
pub struct EquivalenceWitness {
    pub common_polytope: LatticePolytope,
    pub containments: [Containment; 2],
    /// Star resolutions of both fans with `nabla` equal to the common
    /// polytope, when requested.
    pub resolutions: Option<[Fan; 2]>,
}

fn weakest_pairing(xi: &[IntVector], fan: &Fan) -> Result<Pairing> {
    let mut best: Option<Pairing> = None;
    for m in xi {
        if m.rank() != fan.rank() {
            return Err(Error::RankMismatch {
                expected: fan.rank(),
                found: m.rank(),
            });
        }
        let (value, u) = fan.min_pairing(m);
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(Pairing {
                m: m.clone(),
                u: u.clone(),
                value,
            });
        }
    }
    let best = best.ok_or(Error::EmptyPointSet)?;
    if best.value < -1 {
        return Err(Error::ContainmentViolated {
            m: best.m,
            u: best.u,
            pairing: best.value,
        });
    }
    Ok(best)
}

fn containment(xi: &[IntVector], fan: &Fan, p: &LatticePolytope) -> Result<Containment> {
    if !fan.is_complete()? {
        return Err(Error::InvalidFan("fan is not complete".into()));
    }
    let weakest_xi_pairing = weakest_pairing(xi, fan)?;
    let mut slack: Option<Pairing> = None;
    for f in p.facets() {
        for u in fan.rays() {
            let value = f.eval(u);
            if slack.as_ref().is_none_or(|s| value < s.value) {
                slack = Some(Pairing {
                    m: f.normal.clone(),
                    u: u.clone(),
                    value,
                });
            }
        }
    }
    let slack = slack.expect("full-dimensional polytope has facets");
    if slack.value < 0 {
        return Err(Error::ContainmentViolated {
            m: slack.m,
            u: slack.u,
            pairing: slack.value - 1,
        });
    }
    Ok(Containment {
        weakest_xi_pairing,
        weakest_facet_slack: slack,
    })
}

/// Checks `xi ⊆ nabla_i°` for both fans, builds the common polytope
/// `P = resolution_polytope(xi)` and certifies `nabla_i ⊆ P`. With
/// `resolve`, both fans are star-resolved and their `nabla`s compared to `P`.
pub fn equivalence_witness(
    f1: &Fan,
    f2: &Fan,
    xi: &[IntVector],
    resolve: bool,
) -> Result<EquivalenceWitness> {
    if f1.rank() != f2.rank() {
        return Err(Error::RankMismatch {
            expected: f1.rank(),
            found: f2.rank(),
        });
    }
    weakest_pairing(xi, f1)?;
    weakest_pairing(xi, f2)?;
    let p = resolution_polytope(xi)?;
    let containments = [containment(xi, f1, &p)?, containment(xi, f2, &p)?];
    let resolutions = if resolve {
        let delta = convex_hull(xi)?;
        let r1 = f1.star_resolution(&delta)?;
        let r2 = f2.star_resolution(&delta)?;
        let (n1, n2) = (r1.nabla()?, r2.nabla()?);
        if n1.vertices() != p.vertices() || n2.vertices() != p.vertices() {
            return Err(Error::ResolutionUnreachable(
                "resolved fans disagree with the common polytope".into(),
            ));
        }
        Some([r1, r2])
    } else {
        None
    };
    Ok(EquivalenceWitness {
        common_polytope: p,
        containments,
        resolutions,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MirrorDatum {
    /// Rays of the mirror fan, in `M`, sorted.
    pub mirror_rays: Vec<IntVector>,
    /// Monomials of the mirror linear system, in `N`, sorted.
    pub mirror_monomials: Vec<IntVector>,
    /// Points of `xi` that had to be replaced by their primitive vector.
    pub primitivized: Vec<IntVector>,
    /// Whether `xi` contained the origin, which gives no ray.
    pub dropped_origin: bool,
}

/// Swaps the roles of rays and monomials: the rays of the mirror are the
/// points of `xi`, its monomials are the rays of `fan`.
pub fn clarke_mirror(fan: &Fan, xi: &[IntVector]) -> Result<MirrorDatum> {
    weakest_pairing(xi, fan)?;
    let mut rays = BTreeSet::new();
    let mut primitivized = BTreeSet::new();
    let mut dropped_origin = false;
    for m in xi {
        if m.is_zero() {
            dropped_origin = true;
            continue;
        }
        let p = m.primitive()?;
        if &p != m {
            primitivized.insert(m.clone());
        }
        rays.insert(p);
    }
    let rays: Vec<IntVector> = rays.into_iter().collect();
    if rays.is_empty() || !convex_hull(&rays)?.origin_interior() {
        return Err(Error::MirrorFanNotComplete);
    }
    let mut monomials = fan.rays().to_vec();
    monomials.sort();
    Ok(MirrorDatum {
        mirror_rays: rays,
        mirror_monomials: monomials,
        primitivized: primitivized.into_iter().collect(),
        dropped_origin,
    })
}

impl MirrorDatum {
    /// A complete simplicial fan with exactly the mirror rays.
    pub fn mirror_fan(&self) -> Result<Fan> {
        Fan::on_rays(&self.mirror_rays)
    }
}

/// Square invertible exponent matrix with nonnegative entries; row `i`
/// holds the exponents of the `i`-th monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BHKMatrix(Vec<Vec<i64>>);

impl BHKMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::SingularMatrix);
        }
        if rows
            .iter()
            .any(|r| r.iter().any(|&x| x < 0) || r.iter().all(|&x| x == 0))
        {
            return Err(Error::NotWeightedHomogeneous(
                "entries must be nonnegative with a positive entry per row".into(),
            ));
        }
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        if small::det(&refs) == 0 {
            return Err(Error::SingularMatrix);
        }
        Ok(BHKMatrix(rows))
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn transpose(&self) -> BHKMatrix {
        let n = self.size();
        BHKMatrix(
            (0..n)
                .map(|j| (0..n).map(|i| self.0[i][j]).collect())
                .collect(),
        )
    }

    /// `A^{-1} (1,...,1)` as `num / den` with `den > 0`.
    fn inverse_times_ones(&self) -> (Vec<i64>, i64) {
        let n = self.size();
        let cols: Vec<IntVector> = (0..n)
            .map(|j| IntVector::new((0..n).map(|i| self.0[i][j]).collect()))
            .collect();
        let refs: Vec<&IntVector> = cols.iter().collect();
        small::solve_columns(&refs, &IntVector::new(vec![1; n]))
            .expect("invertible by construction")
    }

    /// The exact condition `1^T A^{-1} 1 = 1`.
    pub fn calabi_yau_condition(&self) -> bool {
        let (num, den) = self.inverse_times_ones();
        num.iter().sum::<i64>() == den
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BhkWeights {
    pub weights: WeightSystem,
    pub degree: i64,
    pub calabi_yau: bool,
}

/// The primitive positive solution `q` of `A q = d (1,...,1)`.
pub fn bhk_weights(a: &BHKMatrix) -> Result<BhkWeights> {
    let (num, den) = a.inverse_times_ones();
    if num.iter().any(|&x| x <= 0) {
        return Err(Error::NotWeightedHomogeneous(format!(
            "A^-1 1 = {num:?}/{den} is not positive"
        )));
    }
    let g = num.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
    let q: Vec<i64> = num.iter().map(|x| x / g).collect();
    let degree: i64 = a.rows()[0].iter().zip(&q).map(|(x, y)| x * y).sum();
    debug_assert!(a
        .rows()
        .iter()
        .all(|r| r.iter().zip(&q).map(|(x, y)| x * y).sum::<i64>() == degree));
    let calabi_yau = q.iter().sum::<i64>() == degree;
    Ok(BhkWeights {
        weights: WeightSystem::new(q)?,
        degree,
        calabi_yau,
    })
}

/// Invariant factors (greater than one) of `M / span(xi_A)` where `xi_A` are
/// the rows of `A` read as anticanonical monomials of `P(q_A)`.
pub fn bhk_dual_group(a: &BHKMatrix) -> Result<Vec<i64>> {
    let w = bhk_weights(a)?;
    let fan = wps_fan(&w.weights)?;
    let pts = a
        .rows()
        .iter()
        .map(|r| point_of_exponents(&ExponentVector(r.clone()), &fan))
        .collect::<Result<Vec<_>>>()?;
    let (_, torsion) = cokernel_of_columns(&pts, fan.rank())?;
    Ok(torsion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iv;
    use crate::linear_systems::anticanonical_points;

    fn cross3() -> Vec<IntVector> {
        vec![
            iv![1, 0, 0],
            iv![-1, 0, 0],
            iv![0, 1, 0],
            iv![0, -1, 0],
            iv![0, 0, 1],
            iv![0, 0, -1],
        ]
    }

    fn delta0() -> Vec<IntVector> {
        vec![
            iv![-1, -1, -1],
            iv![1, 0, 0],
            iv![0, 1, 0],
            iv![0, 0, 1],
            iv![0, 0, 0],
        ]
    }

    fn scalar(n: usize, k: i64) -> BHKMatrix {
        BHKMatrix::new(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { k } else { 0 }).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn resolution_of_cross_polytope_is_cube() {
        let p = resolution_polytope(&cross3()).unwrap();
        assert_eq!(p.vertices().len(), 8);
        assert!(p
            .vertices()
            .iter()
            .all(|v| v.coords().iter().all(|x| x.abs() == 1)));
    }

    #[test]
    fn resolution_of_delta0_contains_p3_nabla() {
        let p = resolution_polytope(&delta0()).unwrap();
        assert!(p.is_reflexive().unwrap());
        for u in Fan::projective_space(3).rays() {
            assert!(p.contains(u));
        }
        for v in p.vertices() {
            for m in delta0() {
                assert!(m.dot(v) >= -1);
            }
        }
    }

    #[test]
    fn witness_for_delta0() {
        let f1 = Fan::projective_space(3);
        let f2 = Fan::normal_fan(&convex_hull(&delta0()).unwrap()).unwrap();
        let w = equivalence_witness(&f1, &f2, &delta0(), true).unwrap();
        assert!(w
            .containments
            .iter()
            .all(|c| c.weakest_xi_pairing.value >= -1));
        let [r1, r2] = w.resolutions.unwrap();
        assert_eq!(
            r1.nabla().unwrap().vertices(),
            r2.nabla().unwrap().vertices()
        );
        let same = equivalence_witness(&f1, &f1, &delta0(), false).unwrap();
        assert!(Fan::projective_space(3)
            .rays()
            .iter()
            .all(|u| same.common_polytope.contains(u)));
    }

    #[test]
    fn witness_names_violation() {
        let f = Fan::projective_space(3);
        let err = equivalence_witness(&f, &f, &[iv![-2, 0, 0], iv![0, 0, 1]], false).unwrap_err();
        assert_eq!(
            err,
            Error::ContainmentViolated {
                m: iv![-2, 0, 0],
                u: iv![1, 0, 0],
                pairing: -2
            }
        );
    }

    #[test]
    fn clarke_quintic_and_involution() {
        let f = Fan::projective_space(4);
        let mut xi: Vec<IntVector> = (0..4).map(|i| IntVector::unit(4, i)).collect();
        xi.push(iv![-1, -1, -1, -1]);
        let d = clarke_mirror(&f, &xi).unwrap();
        let mut sorted = xi.clone();
        sorted.sort();
        assert_eq!(d.mirror_rays, sorted);
        assert_eq!(d.mirror_monomials, sorted);
        let back = clarke_mirror(&d.mirror_fan().unwrap(), &d.mirror_monomials).unwrap();
        assert_eq!(back.mirror_rays, d.mirror_monomials);
        assert_eq!(back.mirror_monomials, d.mirror_rays);
    }

    #[test]
    fn clarke_cross_and_cube() {
        let cube = resolution_polytope(&cross3()).unwrap();
        let f = Fan::face_fan(&cube).unwrap();
        let d = clarke_mirror(&f, &cross3()).unwrap();
        let mut c = cross3();
        c.sort();
        assert_eq!(d.mirror_rays, c);
        assert_eq!(d.mirror_monomials, cube.vertices());
    }

    #[test]
    fn clarke_flags_and_rejects() {
        let f = Fan::projective_space(2);
        let d = clarke_mirror(&f, &[iv![2, -1], iv![-1, 2], iv![-1, -1], iv![0, 0]]).unwrap();
        assert!(d.dropped_origin);
        assert!(d.primitivized.is_empty());
        assert_eq!(
            clarke_mirror(&f, &[iv![1, 0], iv![0, 1], iv![0, 0]]).unwrap_err(),
            Error::MirrorFanNotComplete
        );
        let w = WeightSystem::new(vec![1, 1, 1, 3]).unwrap();
        let fan = wps_fan(&w).unwrap();
        let pts = anticanonical_points(&fan).unwrap().points().to_vec();
        // A multiple 2m' pairing >= -1 with every ray of a complete fan forces m' = 0.
        assert!(pts.iter().all(|p| p.is_zero() || p.is_primitive()));
        let d = clarke_mirror(&fan, &pts).unwrap();
        assert!(d.primitivized.is_empty() && d.dropped_origin);
    }

    #[test]
    fn bhk_examples() {
        let w = bhk_weights(&scalar(5, 5)).unwrap();
        assert_eq!(w.weights.weights(), &[1, 1, 1, 1, 1]);
        assert_eq!(w.degree, 5);
        assert!(w.calabi_yau);
        let w = bhk_weights(&scalar(2, 4)).unwrap();
        assert_eq!(
            (w.weights.weights(), w.degree, w.calabi_yau),
            (&[1, 1][..], 4, false)
        );
        let a = BHKMatrix::new(vec![vec![3, 1], vec![1, 3]]).unwrap();
        let w = bhk_weights(&a).unwrap();
        assert_eq!(
            (w.weights.weights(), w.degree, w.calabi_yau),
            (&[1, 1][..], 4, false)
        );
        assert!(BHKMatrix::new(vec![vec![1, 1], vec![1, 1]]).is_err());
    }

    #[test]
    fn bhk_dual_groups() {
        assert_eq!(bhk_dual_group(&scalar(5, 5)).unwrap(), vec![5, 5, 5]);
        assert_eq!(bhk_dual_group(&scalar(3, 3)).unwrap(), vec![3]);
        let chain = BHKMatrix::new(vec![vec![1, 1], vec![0, 2]]).unwrap();
        assert!(bhk_weights(&chain).unwrap().calabi_yau);
        assert!(bhk_dual_group(&chain).unwrap().is_empty());
        assert!(matches!(
            bhk_dual_group(&scalar(2, 4)),
            Err(Error::NotAnticanonicalMonomial(_))
        ));
    }
}
