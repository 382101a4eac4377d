//! Enumeration of the reflexive lattice subpolytopes of a reflexive polytope
//! and their comparison with Reid's list.
//!
//! A subpolytope is identified by its set of lattice points, stored as a
//! bitmask over the lattice points of the ambient polytope. Every hyperplane
//! through `d` affinely independent ambient points is tabulated once with the
//! masks of the points on it and on either side, so facets, vertices and
//! reflexivity of a point set come out of mask arithmetic alone.
//!
//! The search starts from the full point set and removes one vertex at a
//! time: removing a vertex from a closed set gives a closed set, and every
//! closed subset is reached this way. Sets whose hull loses the origin from
//! its interior are dropped together with all their descendants. Levels are
//! processed one set size at a time and deduplicated by sorting, which keeps
//! the output independent of scheduling.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::linalg::small;
use crate::par::Execution;
use crate::polytope::{convex_hull, normal_form, LatticePolytope, NormalFormKey};
use crate::reid::{reid_table, ReidClassification};
use crate::vector::IntVector;

pub type PointMask = u128;

/// Lattice hull of the polar of the standard simplex: the 35 exponent
/// vectors of quartic monomials in four variables.
pub fn quartic_polytope() -> LatticePolytope {
    Fan::projective_space(3)
        .nabla()
        .and_then(|n| n.polar_lattice_hull())
        .expect("projective space fan is complete")
}

struct Plane {
    on: PointMask,
    pos: PointMask,
    neg: PointMask,
    /// Value of `<n, 0> + c` for the stored orientation.
    offset: i64,
}

/// Hyperplane table over the lattice points of an ambient polytope.
pub struct SubpolytopeEngine {
    dim: usize,
    points: Vec<IntVector>,
    origin: usize,
    planes: Vec<Plane>,
    /// For `d = 3`: mask of the ambient points on the line through `i` and `j`.
    lines: Vec<PointMask>,
}

fn combinations(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f);
}

fn bits(mut m: PointMask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(i)
    })
}

/// What the search learns about one point set.
struct NodeInfo {
    reflexive: bool,
    children: Vec<PointMask>,
}

impl SubpolytopeEngine {
    pub fn new(ambient: &LatticePolytope) -> Result<Self> {
        if !ambient.is_full_dimensional() {
            return Err(Error::NotFullDimensional);
        }
        let points = ambient.lattice_points().to_vec();
        if points.len() > PointMask::BITS as usize {
            return Err(Error::UnsupportedDimension(ambient.rank()));
        }
        let dim = ambient.rank();
        let origin = points
            .iter()
            .position(|p| p.is_zero())
            .ok_or(Error::PolarUnbounded)?;
        let n = points.len();
        let mut seen: HashMap<(IntVector, i64), ()> = HashMap::new();
        let mut planes = Vec::new();
        combinations(n, dim, &mut |idx| {
            let base = &points[idx[0]];
            let diffs: Vec<IntVector> = idx[1..].iter().map(|&i| &points[i] - base).collect();
            let normal = small::cofactor_normal(&diffs, dim);
            if normal.is_zero() {
                return;
            }
            let mut normal = normal.primitive().expect("nonzero");
            if normal
                .coords()
                .iter()
                .find(|&&x| x != 0)
                .is_some_and(|&x| x < 0)
            {
                normal = -&normal;
            }
            let offset = -normal.dot(base);
            if seen.insert((normal.clone(), offset), ()).is_some() {
                return;
            }
            let (mut on, mut pos, mut neg) = (0, 0, 0);
            for (i, p) in points.iter().enumerate() {
                match (normal.dot(p) + offset).signum() {
                    0 => on |= 1 << i,
                    1 => pos |= 1 << i,
                    _ => neg |= 1 << i,
                }
            }
            planes.push(Plane {
                on,
                pos,
                neg,
                offset,
            });
        });
        let mut lines = Vec::new();
        if dim == 3 {
            lines = vec![0; n * n];
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let dir = &points[j] - &points[i];
                    let mut m = 0;
                    for (k, p) in points.iter().enumerate() {
                        let w = p - &points[i];
                        if small::cofactor_normal(&[dir.clone(), w], 3).is_zero() {
                            m |= 1 << k;
                        }
                    }
                    lines[i * n + j] = m;
                }
            }
        }
        Ok(SubpolytopeEngine {
            dim,
            points,
            origin,
            planes,
            lines,
        })
    }

    pub fn points(&self) -> &[IntVector] {
        &self.points
    }

    pub fn full_mask(&self) -> PointMask {
        if self.points.len() == PointMask::BITS as usize {
            PointMask::MAX
        } else {
            (1 << self.points.len()) - 1
        }
    }

    pub fn mask_of(&self, pts: &[IntVector]) -> Option<PointMask> {
        pts.iter().try_fold(0, |m, p| {
            self.points.binary_search(p).ok().map(|i| m | 1 << i)
        })
    }

    pub fn points_of(&self, mask: PointMask) -> Vec<IntVector> {
        bits(mask).map(|i| self.points[i].clone()).collect()
    }

    /// Whether the points of `m` affinely span a hyperplane.
    fn spans_hyperplane(&self, m: PointMask) -> bool {
        match self.dim {
            1 => m != 0,
            2 => m.count_ones() >= 2,
            3 => {
                if m.count_ones() < 3 {
                    return false;
                }
                let mut it = bits(m);
                let (a, b) = (it.next().unwrap(), it.next().unwrap());
                m & !self.lines[a * self.points.len() + b] != 0
            }
            d => {
                let idx: Vec<usize> = bits(m).collect();
                let diffs: Vec<IntVector> = idx[1..]
                    .iter()
                    .map(|&i| &self.points[i] - &self.points[idx[0]])
                    .collect();
                small::rank(&diffs.iter().collect::<Vec<_>>()) == d - 1
            }
        }
    }

    /// `None` when the hull of `s` is not full-dimensional or does not have
    /// the origin in its interior.
    fn examine(&self, s: PointMask) -> Option<NodeInfo> {
        if s >> self.origin & 1 == 0 {
            return None;
        }
        let origin_bit: PointMask = 1 << self.origin;
        let mut reflexive = true;
        let mut acc: Vec<PointMask> = vec![PointMask::MAX; self.points.len()];
        let mut touched: PointMask = 0;
        for pl in &self.planes {
            let on = s & pl.on;
            let inner_offset = if s & pl.neg == 0 {
                if s & pl.pos == 0 {
                    return None;
                }
                pl.offset
            } else if s & pl.pos == 0 {
                -pl.offset
            } else {
                continue;
            };
            if !self.spans_hyperplane(on) {
                continue;
            }
            if on & origin_bit != 0 {
                return None;
            }
            debug_assert!(inner_offset > 0);
            reflexive &= inner_offset == 1;
            touched |= on;
            for i in bits(on) {
                acc[i] &= pl.on;
            }
        }
        if touched == 0 {
            return None;
        }
        let children = bits(touched)
            .filter(|&i| acc[i] & s == 1 << i)
            .map(|i| s & !(1 << i))
            .collect();
        Some(NodeInfo {
            reflexive,
            children,
        })
    }

    /// Masks of all reflexive full-dimensional closed subsets, ascending.
    pub fn reflexive_masks(&self, exec: Execution) -> Vec<PointMask> {
        let mut level = vec![self.full_mask()];
        let mut found = Vec::new();
        while !level.is_empty() {
            let infos = exec.map(&level, |&s| self.examine(s));
            let mut next = Vec::new();
            for (s, info) in level.iter().zip(infos) {
                if let Some(info) = info {
                    if info.reflexive {
                        found.push(*s);
                    }
                    next.extend(info.children);
                }
            }
            exec.sort_dedup(&mut next);
            level = next;
        }
        found.sort_unstable();
        found
    }
}

/// SHA-256 of a sorted point set, hex encoded; the key of the cache file.
pub fn point_set_digest(points: &[IntVector]) -> String {
    let text: Vec<String> = points.iter().map(|p| p.to_string()).collect();
    hex::encode(Sha256::digest(text.join(";").as_bytes()))
}

const CACHE_HEADER: &str = "nfcache v1";

/// Append-only file of `point-set digest -> normal form` records.
pub struct NfCache {
    map: Mutex<HashMap<String, NormalFormKey>>,
    file: Option<Mutex<File>>,
    path: Option<PathBuf>,
}

impl NfCache {
    pub fn in_memory() -> Self {
        NfCache {
            map: Mutex::new(HashMap::new()),
            file: None,
            path: None,
        }
    }

    /// Opens or creates a cache file. Existing records are loaded; new ones
    /// are appended as they are computed.
    pub fn open(path: &Path) -> Result<Self> {
        let mut map = HashMap::new();
        let exists = path.exists() && std::fs::metadata(path)?.len() > 0;
        if exists {
            let reader = BufReader::new(File::open(path)?);
            for (i, line) in reader.lines().enumerate() {
                let line = line?;
                let parse_err = |message: String| Error::Parse {
                    line: i + 1,
                    message,
                };
                if i == 0 {
                    if line.trim() != CACHE_HEADER {
                        return Err(parse_err(format!("expected header {CACHE_HEADER:?}")));
                    }
                    continue;
                }
                if line.trim().is_empty() {
                    continue;
                }
                let (digest, nf) = line
                    .split_once(' ')
                    .ok_or_else(|| parse_err("expected '<digest> <normal form>'".into()))?;
                let key = NormalFormKey::decode(nf)
                    .ok_or_else(|| parse_err(format!("bad normal form {nf:?}")))?;
                map.insert(digest.to_string(), key);
            }
        }
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        if !exists {
            writeln!(file, "{CACHE_HEADER}")?;
        }
        Ok(NfCache {
            map: Mutex::new(map),
            file: Some(Mutex::new(file)),
            path: Some(path.to_path_buf()),
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, digest: &str) -> Option<NormalFormKey> {
        self.map.lock().unwrap().get(digest).cloned()
    }

    /// Idempotent: a digest already present is left alone.
    pub fn put(&self, digest: &str, key: &NormalFormKey) -> Result<()> {
        let mut map = self.map.lock().unwrap();
        if map.contains_key(digest) {
            return Ok(());
        }
        map.insert(digest.to_string(), key.clone());
        if let Some(f) = &self.file {
            writeln!(f.lock().unwrap(), "{digest} {}", key.encode())?;
        }
        Ok(())
    }

    pub fn normal_form_of(&self, points: &[IntVector]) -> Result<NormalFormKey> {
        let digest = point_set_digest(points);
        if let Some(k) = self.get(&digest) {
            return Ok(k);
        }
        let key = normal_form(&convex_hull(points)?)?;
        self.put(&digest, &key)?;
        Ok(key)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubpolytopeRecord {
    /// Lattice points of the hull, sorted.
    pub point_set: Vec<IntVector>,
    pub nf: NormalFormKey,
    /// Members of the matching Reid class, if any.
    pub reid_class: Option<Vec<u32>>,
}

impl SubpolytopeRecord {
    pub fn hull(&self) -> Result<LatticePolytope> {
        convex_hull(&self.point_set)
    }
}

/// Lattice point sets of all reflexive full-dimensional subpolytopes, sorted.
pub fn reflexive_point_sets(p: &LatticePolytope, exec: Execution) -> Result<Vec<Vec<IntVector>>> {
    let engine = SubpolytopeEngine::new(p)?;
    Ok(engine
        .reflexive_masks(exec)
        .into_iter()
        .map(|m| engine.points_of(m))
        .collect())
}

/// All reflexive full-dimensional lattice subpolytopes of `p`, with normal
/// forms, ordered by point set.
pub fn enumerate_reflexive_subpolytopes(
    p: &LatticePolytope,
    exec: Execution,
    cache: &NfCache,
) -> Result<Vec<SubpolytopeRecord>> {
    if !p.is_reflexive()? {
        return Err(Error::InvalidFan(
            "ambient polytope is not reflexive".into(),
        ));
    }
    let sets = reflexive_point_sets(p, exec)?;
    let keys = exec
        .map(&sets, |s| cache.normal_form_of(s))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut records: Vec<SubpolytopeRecord> = sets
        .into_iter()
        .zip(keys)
        .map(|(point_set, nf)| SubpolytopeRecord {
            point_set,
            nf,
            reid_class: None,
        })
        .collect();
    records.sort_by(|a, b| a.point_set.cmp(&b.point_set));
    Ok(records)
}

pub fn class_count(records: &[SubpolytopeRecord]) -> usize {
    records.iter().map(|r| &r.nf).collect::<BTreeSet<_>>().len()
}

#[derive(Clone, Debug)]
pub struct ClassMatch {
    pub members: Vec<u32>,
    pub hulls: usize,
    /// Smallest matching point set.
    pub example: Vec<IntVector>,
}

#[derive(Clone, Debug)]
pub struct MatchReport {
    pub matched_hulls: usize,
    /// Reid entry numbers whose class is hit.
    pub families: BTreeSet<u32>,
    pub picard_labels: BTreeSet<String>,
    /// Matched classes ordered by smallest member.
    pub classes: Vec<ClassMatch>,
}

/// Fills in `reid_class` on every record and summarises the matches.
pub fn match_reid(
    records: &mut [SubpolytopeRecord],
    classification: &ReidClassification,
) -> MatchReport {
    let by_key: HashMap<&NormalFormKey, &Vec<u32>> = classification
        .classes
        .iter()
        .map(|c| (&c.normal_form, &c.members))
        .collect();
    let mut per_class: BTreeMap<Vec<u32>, ClassMatch> = BTreeMap::new();
    let mut matched_hulls = 0;
    for r in records.iter_mut() {
        r.reid_class = by_key.get(&r.nf).map(|m| (*m).clone());
        if let Some(m) = &r.reid_class {
            matched_hulls += 1;
            let e = per_class.entry(m.clone()).or_insert_with(|| ClassMatch {
                members: m.clone(),
                hulls: 0,
                example: r.point_set.clone(),
            });
            e.hulls += 1;
            if r.point_set < e.example {
                e.example = r.point_set.clone();
            }
        }
    }
    let families: BTreeSet<u32> = per_class.keys().flatten().copied().collect();
    let picard_labels = reid_table()
        .iter()
        .filter(|e| families.contains(&e.number))
        .map(|e| e.picard_label.clone())
        .collect();
    MatchReport {
        matched_hulls,
        families,
        picard_labels,
        classes: per_class.into_values().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iv;

    fn p2_triangle() -> LatticePolytope {
        Fan::projective_space(2)
            .nabla()
            .unwrap()
            .polar_lattice_hull()
            .unwrap()
    }

    /// Distinct reflexive hulls of all subsets, as sorted lattice point sets.
    fn subset_oracle(p: &LatticePolytope) -> BTreeSet<Vec<IntVector>> {
        let pts = p.lattice_points();
        let mut out = BTreeSet::new();
        for mask in 1u32..(1 << pts.len()) {
            let sub: Vec<IntVector> = (0..pts.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| pts[i].clone())
                .collect();
            let Ok(h) = convex_hull(&sub) else { continue };
            if h.is_full_dimensional() && h.origin_interior() && h.is_reflexive().unwrap() {
                out.insert(h.lattice_points().to_vec());
            }
        }
        out
    }

    #[test]
    fn quartic_polytope_shape() {
        let q = quartic_polytope();
        assert_eq!(q.lattice_points().len(), 35);
        assert_eq!(q.vertices().len(), 4);
        assert_eq!(q.interior_lattice_points(), vec![iv![0, 0, 0]]);
    }

    #[test]
    fn plane_triangle_matches_subset_oracle() {
        let p = p2_triangle();
        assert_eq!(p.lattice_points().len(), 10);
        let oracle = subset_oracle(&p);
        for exec in [Execution::Parallel, Execution::Sequential] {
            let got: BTreeSet<Vec<IntVector>> = reflexive_point_sets(&p, exec)
                .unwrap()
                .into_iter()
                .collect();
            assert_eq!(got, oracle);
        }
        assert!(oracle.len() > 1);
    }

    #[test]
    fn cross_polytope_matches_subset_oracle() {
        let cross = convex_hull(&[
            iv![1, 0, 0],
            iv![-1, 0, 0],
            iv![0, 1, 0],
            iv![0, -1, 0],
            iv![0, 0, 1],
            iv![0, 0, -1],
        ])
        .unwrap();
        let got: BTreeSet<Vec<IntVector>> = reflexive_point_sets(&cross, Execution::Sequential)
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(got, subset_oracle(&cross));
    }

    #[test]
    fn cache_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nf.cache");
        let pts = p2_triangle().lattice_points().to_vec();
        let key = {
            let c = NfCache::open(&path).unwrap();
            let k = c.normal_form_of(&pts).unwrap();
            c.put(&point_set_digest(&pts), &k).unwrap();
            k
        };
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.starts_with("nfcache v1\n"));
        let c = NfCache::open(&path).unwrap();
        assert_eq!(c.get(&point_set_digest(&pts)), Some(key));
        std::fs::write(&path, "nfcache v2\n").unwrap();
        assert!(matches!(
            NfCache::open(&path),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
