#![allow(dead_code)]

use std::sync::Arc;

use orbit_site_core::fincat::FinCat;
use orbit_site_core::group::{group_from_spec, PermGroup};
use orbit_site_core::orbit::OrbitTower;
use orbit_site_core::presheaf::{random_cyclic_presheaf, AbPresheaf, CyclicKind};
use orbit_site_core::Guards;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const BATTERY: &[(&str, u64, &[u64])] = &[
    ("S3", 3, &[3, 4, 5]),
    ("C4", 2, &[3, 5]),
    ("Q8", 2, &[3, 5]),
    ("D8", 2, &[3, 5]),
    ("A4", 2, &[3, 4, 7]),
    ("S4", 2, &[3, 5]),
    ("S4", 3, &[4, 7]),
    ("A4", 3, &[4, 7]),
];

pub fn group(spec: &str) -> Arc<PermGroup> {
    Arc::new(group_from_spec(spec, &Guards::default()).unwrap())
}

pub fn tower(spec: &str, p: u64) -> OrbitTower {
    OrbitTower::new(group(spec), p).unwrap()
}

/// The distinct (group, p) pairs of the battery.
pub fn battery_towers() -> Vec<(&'static str, u64, OrbitTower)> {
    BATTERY.iter().map(|&(g, p, _)| (g, p, tower(g, p))).collect()
}

/// Two seeded cyclic presheaves (one of each kind).
pub fn random_pair(c: &FinCat, seed: u64) -> [AbPresheaf; 2] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pick = |k: u64| rng.gen_range(0..k);
    let base_a = [4u64, 6, 8, 12][pick(4) as usize];
    let a = random_cyclic_presheaf(c, base_a, CyclicKind::Reduction, None, &mut pick);
    let base_b = [4u64, 6, 8, 12][pick(4) as usize];
    let b = random_cyclic_presheaf(c, base_b, CyclicKind::Inclusion, None, &mut pick);
    [a, b]
}
