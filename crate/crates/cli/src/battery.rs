//! The default verification battery and its seeded random coefficients.

use std::sync::Arc;

use orbit_site_core::fincat::FinCat;
use orbit_site_core::group::{group_from_spec, PermGroup};
use orbit_site_core::orbit::OrbitTower;
use orbit_site_core::presheaf::{random_cyclic_presheaf, AbPresheaf, CyclicKind};
use orbit_site_core::Guards;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// One `(G, p, q)` triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case {
    pub group: String,
    pub p: u64,
    pub q: u64,
}

impl Case {
    pub fn new(group: &str, p: u64, q: u64) -> Self {
        Case { group: group.into(), p, q }
    }

    pub fn label(&self) -> String {
        format!("{} p={} q={}", self.group, self.p, self.q)
    }
}

pub const DEFAULT_BATTERY: &[(&str, u64, &[u64])] = &[
    ("S3", 3, &[3, 4, 5]),
    ("C4", 2, &[3, 5]),
    ("Q8", 2, &[3, 5]),
    ("D8", 2, &[3, 5]),
    ("A4", 2, &[3, 4, 7]),
    ("S4", 2, &[3, 5]),
    ("S4", 3, &[4, 7]),
    ("A4", 3, &[4, 7]),
];

pub fn default_battery() -> Vec<Case> {
    DEFAULT_BATTERY.iter().flat_map(|&(g, p, qs)| qs.iter().map(move |&q| Case::new(g, p, q))).collect()
}

/// The distinct `(G, p)` pairs of a battery, in first-seen order.
pub fn pairs(cases: &[Case]) -> Vec<(String, u64)> {
    let mut out: Vec<(String, u64)> = Vec::new();
    for c in cases {
        if !out.iter().any(|(g, p)| *g == c.group && *p == c.p) {
            out.push((c.group.clone(), c.p));
        }
    }
    out
}

pub fn build_group(spec: &str, guards: &Guards) -> orbit_site_core::Result<Arc<PermGroup>> {
    Ok(Arc::new(group_from_spec(spec, guards)?))
}

pub fn build_tower(spec: &str, p: u64, guards: &Guards) -> orbit_site_core::Result<OrbitTower> {
    OrbitTower::new(build_group(spec, guards)?, p)
}

/// FNV-1a, so seeds do not depend on the platform hasher.
fn fnv(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Two cyclic presheaves on `c` with values of order dividing 4, 6, 8 or 12:
/// one with reduction maps and one with inclusion maps. The seed depends only
/// on `tag` and `salt`.
pub fn random_coefficients(c: &FinCat, tag: &str, salt: u64) -> [AbPresheaf; 2] {
    let mut rng = ChaCha8Rng::seed_from_u64(fnv(tag) ^ salt);
    let mut pick = |k: u64| rng.gen_range(0..k);
    let base_a = [4u64, 6, 8, 12][pick(4) as usize];
    let a = random_cyclic_presheaf(c, base_a, CyclicKind::Reduction, None, &mut pick);
    let base_b = [4u64, 6, 8, 12][pick(4) as usize];
    let b = random_cyclic_presheaf(c, base_b, CyclicKind::Inclusion, None, &mut pick);
    [a, b]
}
