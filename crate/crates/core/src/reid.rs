//! Reid's 95 weighted projective 3-spaces, with Picard lattice labels and
//! external polytope indices, and the checks run over them.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linear_systems::{
    anticanonical_points, is_quasismooth, wps_fan, QuasismoothVerdict, WeightSystem,
};
use crate::par::Execution;
use crate::polytope::{convex_hull, normal_form, LatticePolytope, NormalFormKey};

const TABLE: &str = include_str!("../data/reid_table.jsonl");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReidEntry {
    pub number: u32,
    pub weights: WeightSystem,
    /// Picard lattice of the resolved generic member, as an ASCII label:
    /// `+` for orthogonal sum, `<k>` for a rank-one lattice, `L^k` for powers.
    #[serde(rename = "picard")]
    pub picard_label: String,
    /// Position of the polytope in an external database ordering.
    #[serde(rename = "index")]
    pub external_index: u32,
}

/// The 95 entries, ordered by number.
pub fn reid_table() -> &'static [ReidEntry] {
    static T: OnceLock<Vec<ReidEntry>> = OnceLock::new();
    T.get_or_init(|| {
        let mut v: Vec<ReidEntry> = TABLE
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| serde_json::from_str(l).expect("bundled table is well formed"))
            .collect();
        v.sort_by_key(|e| e.number);
        v
    })
}

pub fn reid_entry(number: u32) -> Option<&'static ReidEntry> {
    reid_table().iter().find(|e| e.number == number)
}

/// Hull of the anticanonical lattice points of `P(weights)`.
pub fn reid_delta(e: &ReidEntry) -> Result<LatticePolytope> {
    let fan = wps_fan(&e.weights)?;
    convex_hull(anticanonical_points(&fan)?.points())
}

#[derive(Clone, Debug, Serialize)]
pub struct ReidCheck {
    pub number: u32,
    pub reflexive: bool,
    pub quasismooth: bool,
    pub violating: Option<Vec<usize>>,
    pub gorenstein: bool,
    pub lattice_points: usize,
    pub vertices: usize,
}

impl ReidCheck {
    /// All checks as expected: reflexive, criterion satisfied, and
    /// Gorenstein exactly for the first fourteen entries.
    pub fn passes(&self) -> bool {
        self.reflexive && self.quasismooth && self.gorenstein == (self.number <= 14)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReidReport {
    pub checks: Vec<ReidCheck>,
}

impl ReidReport {
    pub fn reflexive_count(&self) -> usize {
        self.checks.iter().filter(|c| c.reflexive).count()
    }

    pub fn quasismooth_count(&self) -> usize {
        self.checks.iter().filter(|c| c.quasismooth).count()
    }

    pub fn gorenstein_numbers(&self) -> Vec<u32> {
        self.checks
            .iter()
            .filter(|c| c.gorenstein)
            .map(|c| c.number)
            .collect()
    }

    pub fn failures(&self) -> Vec<u32> {
        self.checks
            .iter()
            .filter(|c| !c.passes())
            .map(|c| c.number)
            .collect()
    }

    pub fn all_pass(&self) -> bool {
        self.checks.len() == 95 && self.failures().is_empty()
    }
}

fn check_entry(e: &ReidEntry) -> Result<ReidCheck> {
    let fan = wps_fan(&e.weights)?;
    let xi = anticanonical_points(&fan)?;
    let delta = convex_hull(xi.points())?;
    let QuasismoothVerdict {
        satisfied,
        violating,
    } = is_quasismooth(&xi);
    Ok(ReidCheck {
        number: e.number,
        reflexive: delta.is_reflexive()?,
        quasismooth: satisfied,
        violating,
        gorenstein: e.weights.is_gorenstein(),
        lattice_points: delta.lattice_points().len(),
        vertices: delta.vertices().len(),
    })
}

pub fn verify_reid(exec: Execution) -> Result<ReidReport> {
    let checks = exec
        .map(reid_table(), check_entry)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(ReidReport { checks })
}

#[derive(Clone, Debug)]
pub struct ReidClass {
    /// Entry numbers, ascending.
    pub members: Vec<u32>,
    pub normal_form: NormalFormKey,
}

#[derive(Clone, Debug)]
pub struct ReidClassification {
    /// Classes ordered by smallest member.
    pub classes: Vec<ReidClass>,
}

impl ReidClassification {
    pub fn class_of(&self, number: u32) -> Option<&ReidClass> {
        self.classes.iter().find(|c| c.members.contains(&number))
    }

    pub fn nontrivial_groups(&self) -> Vec<Vec<u32>> {
        self.classes
            .iter()
            .filter(|c| c.members.len() > 1)
            .map(|c| c.members.clone())
            .collect()
    }

    pub fn class_by_key(&self, key: &NormalFormKey) -> Option<&ReidClass> {
        self.classes.iter().find(|c| &c.normal_form == key)
    }
}

/// Groups the entries by the normal form of their polytope.
pub fn classify_entries(entries: &[ReidEntry], exec: Execution) -> Result<ReidClassification> {
    let keys = exec
        .map(entries, |e| {
            reid_delta(e)
                .and_then(|d| normal_form(&d))
                .map(|k| (e.number, k))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut groups: BTreeMap<NormalFormKey, Vec<u32>> = BTreeMap::new();
    for (n, k) in keys {
        groups.entry(k).or_default().push(n);
    }
    let mut classes: Vec<ReidClass> = groups
        .into_iter()
        .map(|(normal_form, mut members)| {
            members.sort_unstable();
            ReidClass {
                members,
                normal_form,
            }
        })
        .collect();
    classes.sort_by_key(|c| c.members[0]);
    Ok(ReidClassification { classes })
}

pub fn classify_reid(exec: Execution) -> Result<ReidClassification> {
    classify_entries(reid_table(), exec)
}
