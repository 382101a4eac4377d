//! Complete fans as combinatorial objects: rays plus maximal cones stored as
//! ray-index sets. Geometric questions (membership, faces) are answered by
//! recomputing exact cone inequalities on demand.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::small;
use crate::polytope::{convex_hull, LatticePolytope};
use crate::vector::IntVector;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    rank: usize,
    rays: Vec<IntVector>,
    cones: Vec<Vec<usize>>,
}

/// A facet of a cone: inward primitive normal and the generators on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeFacet {
    pub normal: IntVector,
    pub generators: Vec<usize>,
}

impl Fan {
    /// Validates rays (primitive, distinct, common rank) and cones (indices in
    /// range, every ray used). Cones are normalized to sorted index sets.
    pub fn new(rays: Vec<IntVector>, cones: Vec<Vec<usize>>) -> Result<Fan> {
        let rank = rays
            .first()
            .map(|r| r.rank())
            .ok_or_else(|| Error::InvalidFan("no rays".into()))?;
        for r in &rays {
            if r.rank() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    found: r.rank(),
                });
            }
            if !r.is_primitive() {
                return Err(Error::NotPrimitive(r.clone()));
            }
        }
        if rays.iter().collect::<BTreeSet<_>>().len() != rays.len() {
            return Err(Error::InvalidFan("duplicate rays".into()));
        }
        let mut used = vec![false; rays.len()];
        let mut norm = BTreeSet::new();
        for c in cones {
            let c: BTreeSet<usize> = c.into_iter().collect();
            for &i in &c {
                if i >= rays.len() {
                    return Err(Error::InvalidFan(format!("ray index {i} out of range")));
                }
                used[i] = true;
            }
            norm.insert(c.into_iter().collect::<Vec<_>>());
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(Error::InvalidFan(format!("ray {} is in no cone", rays[i])));
        }
        Ok(Fan {
            rank,
            rays,
            cones: norm.into_iter().collect(),
        })
    }

    /// Fan of projective `n`-space: rays `e_1..e_n, -(e_1+...+e_n)`, maximal
    /// cones all `n`-subsets.
    pub fn projective_space(n: usize) -> Fan {
        let mut rays: Vec<IntVector> = (0..n).map(|i| IntVector::unit(n, i)).collect();
        rays.push(IntVector::new(vec![-1; n]));
        let cones = (0..=n)
            .map(|skip| (0..=n).filter(|&i| i != skip).collect())
            .collect();
        Fan::new(rays, cones).expect("projective space fan is valid")
    }

    /// Cones over the faces of a polytope with the origin in its interior.
    pub fn face_fan(p: &LatticePolytope) -> Result<Fan> {
        if !p.origin_interior() {
            return Err(Error::PolarUnbounded);
        }
        let rays: Vec<IntVector> = p
            .vertices()
            .iter()
            .map(|v| v.primitive())
            .collect::<Result<_>>()?;
        let cones = p
            .facets()
            .iter()
            .map(|f| {
                (0..rays.len())
                    .filter(|&i| f.eval(&p.vertices()[i]) == 0)
                    .collect()
            })
            .collect();
        Fan::new(rays, cones)
    }

    /// Normal fan of a polytope with the origin in its interior: rays are the
    /// inward facet normals, one maximal cone per vertex.
    pub fn normal_fan(p: &LatticePolytope) -> Result<Fan> {
        if !p.origin_interior() {
            return Err(Error::PolarUnbounded);
        }
        let rays: Vec<IntVector> = p.facets().iter().map(|f| f.normal.clone()).collect();
        let cones = p
            .vertices()
            .iter()
            .map(|v| {
                (0..rays.len())
                    .filter(|&i| p.facets()[i].eval(v) == 0)
                    .collect()
            })
            .collect();
        Fan::new(rays, cones)
    }

    /// Complete simplicial fan whose rays are exactly the primitive vectors on
    /// the given points: the face fan of their hull, simplicialized, then
    /// star-subdivided at the remaining points in lexicographic order.
    pub fn on_rays(points: &[IntVector]) -> Result<Fan> {
        let prims: BTreeSet<IntVector> = points
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| p.primitive())
            .collect::<Result<_>>()?;
        let prims: Vec<IntVector> = prims.into_iter().collect();
        let hull = convex_hull(&prims)?;
        if !hull.origin_interior() {
            return Err(Error::RaysNotSpanning);
        }
        let mut fan = Fan::face_fan(&hull)?.simplicialize()?;
        for p in &prims {
            fan = fan.star_subdivision(p)?;
        }
        Ok(fan)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn ray_index(&self, v: &IntVector) -> Option<usize> {
        self.rays.iter().position(|r| r == v)
    }

    fn cone_rank(&self, cone: &[usize]) -> usize {
        let gens: Vec<&IntVector> = cone.iter().map(|&i| &self.rays[i]).collect();
        small::rank(&gens)
    }

    /// Facets of a full-dimensional cone.
    pub fn cone_facets(&self, cone: &[usize]) -> Vec<ConeFacet> {
        let d = self.rank;
        let mut out: Vec<ConeFacet> = Vec::new();
        if d == 1 {
            let g = &self.rays[cone[0]];
            return vec![ConeFacet {
                normal: g.clone(),
                generators: Vec::new(),
            }];
        }
        let k = cone.len();
        if k < d - 1 {
            return out;
        }
        let mut idx: Vec<usize> = (0..d - 1).collect();
        loop {
            let rows: Vec<IntVector> = idx.iter().map(|&i| self.rays[cone[i]].clone()).collect();
            let n = small::cofactor_normal(&rows, d);
            if !n.is_zero() {
                let n = n.primitive().expect("nonzero");
                let vals: Vec<i64> = cone.iter().map(|&g| n.dot(&self.rays[g])).collect();
                let normal = if vals.iter().all(|&v| v >= 0) {
                    Some(n)
                } else if vals.iter().all(|&v| v <= 0) {
                    Some(-&n)
                } else {
                    None
                };
                if let Some(normal) = normal {
                    if !out.iter().any(|f| f.normal == normal) {
                        let generators = cone
                            .iter()
                            .copied()
                            .filter(|&g| normal.dot(&self.rays[g]) == 0)
                            .collect();
                        out.push(ConeFacet { normal, generators });
                    }
                }
            }
            let mut i = d - 1;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if idx[i] < k - (d - 1) + i {
                    idx[i] += 1;
                    for j in i + 1..d - 1 {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    fn check_pure(&self) -> Result<()> {
        for (i, c) in self.cones.iter().enumerate() {
            if self.cone_rank(c) != self.rank {
                return Err(Error::NonPureFan(i));
            }
        }
        Ok(())
    }

    /// Every ridge of every maximal cone lies in exactly two maximal cones.
    pub fn is_complete(&self) -> Result<bool> {
        self.check_pure()?;
        if self.cones.is_empty() {
            return Ok(false);
        }
        let mut count: HashMap<Vec<usize>, usize> = HashMap::new();
        for c in &self.cones {
            for f in self.cone_facets(c) {
                *count.entry(f.generators).or_default() += 1;
            }
        }
        Ok(count.values().all(|&n| n == 2))
    }

    pub fn is_simplicial(&self) -> Result<bool> {
        self.check_pure()?;
        Ok(self.cones.iter().all(|c| c.len() == self.rank))
    }

    /// Whether `v` lies in the (full-dimensional) maximal cone.
    pub fn cone_contains(&self, cone: &[usize], v: &IntVector) -> bool {
        self.cone_facets(cone).iter().all(|f| f.normal.dot(v) >= 0)
    }

    /// Star subdivision at a primitive `v` in the support: maximal cones not
    /// containing `v` are kept, every maximal cone containing `v` is replaced
    /// by the cones spanned by `v` and its facets that miss `v`.
    pub fn star_subdivision(&self, v: &IntVector) -> Result<Fan> {
        if v.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: v.rank(),
            });
        }
        if !v.is_primitive() {
            return Err(Error::NotPrimitive(v.clone()));
        }
        let mut rays = self.rays.clone();
        let vi = match self.ray_index(v) {
            Some(i) => i,
            None => {
                rays.push(v.clone());
                rays.len() - 1
            }
        };
        let mut hit = false;
        let mut cones: BTreeSet<Vec<usize>> = BTreeSet::new();
        for c in &self.cones {
            let facets = self.cone_facets(c);
            if !facets.iter().all(|f| f.normal.dot(v) >= 0) {
                cones.insert(c.clone());
                continue;
            }
            hit = true;
            for f in facets.iter().filter(|f| f.normal.dot(v) > 0) {
                let mut g = f.generators.clone();
                g.push(vi);
                g.sort_unstable();
                cones.insert(g);
            }
        }
        if !hit {
            return Err(Error::OutsideSupport(v.clone()));
        }
        Ok(Fan {
            rank: self.rank,
            rays,
            cones: cones.into_iter().collect(),
        })
    }

    /// Simplicial refinement with the same rays, by star subdivision at the
    /// existing rays in order.
    pub fn simplicialize(&self) -> Result<Fan> {
        let mut fan = self.clone();
        for i in 0..self.rays.len() {
            if fan.is_simplicial()? {
                break;
            }
            fan = fan.star_subdivision(&self.rays[i])?;
        }
        Ok(fan)
    }

    /// `Conv(u_rho)`, the hull of the ray generators.
    pub fn nabla(&self) -> Result<LatticePolytope> {
        let p = convex_hull(&self.rays)?;
        if !p.origin_interior() {
            return Err(Error::RaysNotSpanning);
        }
        Ok(p)
    }

    /// Minimum of `<m, u_rho>` over the rays together with a minimizing ray.
    pub fn min_pairing(&self, m: &IntVector) -> (i64, &IntVector) {
        self.rays
            .iter()
            .map(|u| (m.dot(u), u))
            .min_by_key(|(p, _)| *p)
            .expect("fan has rays")
    }

    /// Sequence of star subdivisions taking this fan to a simplicial fan whose
    /// `nabla` is the lattice hull of the polar of `delta`.
    ///
    /// The simplicial refinement is subdivided at every primitive nonzero
    /// lattice point of the target that is not already a ray, in lexicographic
    /// order; the result is checked against the target.
    pub fn star_resolution(&self, delta: &LatticePolytope) -> Result<Fan> {
        if delta.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: delta.rank(),
            });
        }
        if !delta.is_full_dimensional() {
            return Err(Error::NotFullDimensional);
        }
        for m in delta.vertices() {
            let (pairing, u) = self.min_pairing(m);
            if pairing < -1 {
                return Err(Error::NotInAnticanonicalPolar {
                    m: m.clone(),
                    u: u.clone(),
                    pairing,
                });
            }
        }
        let target = delta.polar_lattice_hull()?;
        let mut fan = self.simplicialize()?;
        for p in target.lattice_points() {
            if p.is_zero() || !p.is_primitive() || fan.ray_index(p).is_some() {
                continue;
            }
            fan = fan.star_subdivision(p)?;
        }
        let got = fan.nabla()?;
        if got.vertices() != target.vertices() {
            let missing: Vec<String> = target
                .vertices()
                .iter()
                .filter(|v| !got.vertices().contains(v))
                .map(|v| v.to_string())
                .collect();
            return Err(Error::ResolutionUnreachable(format!(
                "target vertices not reached: {}",
                missing.join(" ")
            )));
        }
        Ok(fan)
    }
}
