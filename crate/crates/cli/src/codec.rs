//! JSON file formats for categories, orbit categories, sieves, topologies
//! and presheaves.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use orbit_site_core::bitset::BitSet;
use orbit_site_core::fincat::{CategoryParts, FinCat, Morphism};
use orbit_site_core::group::group_from_spec;
use orbit_site_core::linalg::{AbGroup, Integer, Matrix};
use orbit_site_core::orbit::{OrbitCategory, Variant};
use orbit_site_core::presheaf::{AbPresheaf, SetPresheaf};
use orbit_site_core::site::{FiniteTopology, Sieve};
use orbit_site_core::Guards;
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "orbit-site/1";

#[derive(Debug, thiserror::Error)]
pub enum CodecError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] orbit_site_core::Error),
}

/// An integer that is written as a JSON number when it fits in `i64` and as
/// a decimal string otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntJson {
    Small(i64),
    Big(String),
}

impl From<&Integer> for IntJson {
    fn from(x: &Integer) -> Self {
        match x.to_i64() {
            Some(v) => IntJson::Small(v),
            None => IntJson::Big(x.to_string()),
        }
    }
}

impl IntJson {
    pub fn to_integer(&self) -> Result<Integer, CodecError> {
        match self {
            IntJson::Small(v) => Ok(BigInt::from(*v)),
            IntJson::Big(s) => s.parse().map_err(|_| CodecError::Invalid(format!("bad integer {s:?}"))),
        }
    }
}

pub fn ints(v: &[Integer]) -> Vec<IntJson> {
    v.iter().map(IntJson::from).collect()
}

/// Row-major integer arrays.
pub fn matrix_to_json(m: &Matrix) -> MatrixJson {
    MatrixJson { rows: m.rows(), cols: m.cols(), entries: (0..m.rows()).map(|i| ints(m.row(i))).collect() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<IntJson>>,
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<Matrix, CodecError> {
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(CodecError::Invalid("matrix shape does not match its entries".into()));
        }
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().map(IntJson::to_integer).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(if self.rows == 0 { Matrix::zeros(0, self.cols) } else { Matrix::from_rows(rows, self.cols) })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub id: usize,
    pub dom: usize,
    pub cod: usize,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryJson {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismJson>,
    pub identities: Vec<usize>,
    /// `[g, f, g∘f]`
    pub compose: Vec<[usize; 3]>,
}

impl CategoryJson {
    pub fn from_cat(c: &FinCat) -> Self {
        let parts = c.to_parts();
        CategoryJson {
            objects: parts.objects,
            morphisms: parts
                .morphisms
                .into_iter()
                .enumerate()
                .map(|(id, m)| MorphismJson { id, dom: m.dom, cod: m.cod, label: m.label })
                .collect(),
            identities: parts.identities,
            compose: parts.compose.into_iter().map(|(g, f, h)| [g, f, h]).collect(),
        }
    }

    pub fn to_cat(&self) -> Result<FinCat, CodecError> {
        if self.morphisms.iter().enumerate().any(|(i, m)| m.id != i) {
            return Err(CodecError::Invalid("morphism ids must be 0, 1, 2, … in order".into()));
        }
        let parts = CategoryParts {
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|m| Morphism { dom: m.dom, cod: m.cod, label: m.label.clone() })
                .collect(),
            identities: self.identities.clone(),
            compose: self.compose.iter().map(|&[g, f, h]| (g, f, h)).collect(),
        };
        FinCat::from_parts(&parts).map_err(|v| CodecError::Invalid(format!("not a category: {v:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitJson {
    pub schema: String,
    #[serde(flatten)]
    pub category: CategoryJson,
    pub group: String,
    /// Subgroup of each object as a bit string over element indices.
    pub object_subgroups: Vec<String>,
    pub morphism_cosets: Vec<usize>,
    pub variant: String,
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topology: Option<TopologyJson>,
}

pub fn parse_variant(s: &str) -> Option<Variant> {
    [Variant::All, Variant::PSubgroups, Variant::PNontrivial, Variant::PCoprimeIndex]
        .into_iter()
        .find(|v| v.as_str() == s)
}

impl OrbitJson {
    pub fn from_orbit(descriptor: &str, o: &OrbitCategory) -> Self {
        OrbitJson {
            schema: SCHEMA.into(),
            category: CategoryJson::from_cat(&o.cat),
            group: descriptor.into(),
            object_subgroups: (0..o.cat.object_count()).map(|x| o.subgroup(x).members().to_bit_string()).collect(),
            morphism_cosets: o.morphism_coset.clone(),
            variant: o.variant.as_str().into(),
            p: o.p,
            topology: None,
        }
    }

    /// Rebuilds the orbit category from the descriptor and checks that the
    /// stored tables agree with it.
    pub fn to_orbit(&self, guards: &Guards) -> Result<OrbitCategory, CodecError> {
        let variant = parse_variant(&self.variant)
            .ok_or_else(|| CodecError::Invalid(format!("unknown variant {:?}", self.variant)))?;
        let group = Arc::new(group_from_spec(&self.group, guards)?);
        let o = OrbitCategory::new(group, self.p, variant)?;
        let cat = self.category.to_cat()?;
        if cat != o.cat || self.morphism_cosets != o.morphism_coset {
            return Err(CodecError::Invalid("tables differ from the rebuilt orbit category".into()));
        }
        for (x, bits) in self.object_subgroups.iter().enumerate() {
            if BitSet::from_bit_string(bits).as_ref() != Some(o.subgroup(x).members()) {
                return Err(CodecError::Invalid(format!("subgroup of object {x} differs")));
            }
        }
        Ok(o)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveJson {
    pub apex: usize,
    /// `[object, [morphism ids from that object]]`, by object.
    pub members: Vec<(usize, Vec<usize>)>,
}

impl SieveJson {
    pub fn from_sieve(c: &FinCat, s: &Sieve) -> Self {
        let mut members: Vec<(usize, Vec<usize>)> = Vec::new();
        for f in s.members() {
            let d = c.dom(f);
            match members.iter_mut().find(|(o, _)| *o == d) {
                Some((_, v)) => v.push(f),
                None => members.push((d, vec![f])),
            }
        }
        members.sort();
        SieveJson { apex: s.apex, members }
    }

    pub fn to_sieve(&self, c: &FinCat) -> Result<Sieve, CodecError> {
        let mut bits = BitSet::new(c.morphism_count());
        for (d, fs) in &self.members {
            for &f in fs {
                if f >= c.morphism_count() || c.dom(f) != *d || c.cod(f) != self.apex {
                    return Err(CodecError::Invalid(format!("morphism {f} does not fit the sieve")));
                }
                bits.insert(f);
            }
        }
        let s = Sieve::from_members(self.apex, bits);
        if !s.is_sieve(c) {
            return Err(CodecError::Invalid("member set is not closed under precomposition".into()));
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyJson {
    pub min_sieves: Vec<SieveJson>,
}

impl TopologyJson {
    pub fn from_topology(c: &FinCat, t: &FiniteTopology) -> Self {
        TopologyJson { min_sieves: t.min_sieves.iter().map(|s| SieveJson::from_sieve(c, s)).collect() }
    }

    pub fn to_topology(&self, c: &FinCat) -> Result<FiniteTopology, CodecError> {
        if self.min_sieves.len() != c.object_count() {
            return Err(CodecError::Invalid("one minimal sieve per object is required".into()));
        }
        let min_sieves = self
            .min_sieves
            .iter()
            .enumerate()
            .map(|(x, s)| {
                if s.apex != x {
                    return Err(CodecError::Invalid(format!("sieve {x} has apex {}", s.apex)));
                }
                s.to_sieve(c)
            })
            .collect::<Result<_, _>>()?;
        Ok(FiniteTopology { min_sieves })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PresheafJson {
    /// Values as diagonal moduli (0 for `Z`), maps `M(cod f) → M(dom f)`.
    Abelian {
        values: Vec<Vec<IntJson>>,
        maps: Vec<MatrixJson>,
    },
    Set {
        values: Vec<usize>,
        maps: Vec<Vec<usize>>,
    },
}

impl PresheafJson {
    pub fn from_abelian(m: &AbPresheaf) -> Self {
        PresheafJson::Abelian {
            values: m.values.iter().map(|g| ints(g.moduli())).collect(),
            maps: m.maps.iter().map(matrix_to_json).collect(),
        }
    }

    pub fn from_set(f: &SetPresheaf) -> Self {
        PresheafJson::Set { values: f.values.clone(), maps: f.maps.clone() }
    }

    pub fn to_abelian(&self, c: &FinCat) -> Result<AbPresheaf, CodecError> {
        let PresheafJson::Abelian { values, maps } = self else {
            return Err(CodecError::Invalid("expected an abelian presheaf".into()));
        };
        let values = values
            .iter()
            .map(|v| Ok(AbGroup::from_moduli(v.iter().map(IntJson::to_integer).collect::<Result<_, _>>()?)))
            .collect::<Result<Vec<_>, CodecError>>()?;
        let maps = maps.iter().map(MatrixJson::to_matrix).collect::<Result<Vec<_>, _>>()?;
        let m = AbPresheaf { values, maps };
        if !m.is_functorial(c) {
            return Err(CodecError::Invalid("presheaf is not functorial on the category".into()));
        }
        Ok(m)
    }

    pub fn to_set(&self, c: &FinCat) -> Result<SetPresheaf, CodecError> {
        let PresheafJson::Set { values, maps } = self else {
            return Err(CodecError::Invalid("expected a set presheaf".into()));
        };
        let f = SetPresheaf { values: values.clone(), maps: maps.clone() };
        if !f.is_functorial(c) {
            return Err(CodecError::Invalid("presheaf is not functorial on the category".into()));
        }
        Ok(f)
    }
}

/// Invariant factors with `0` standing for a free summand.
pub fn invariant_factors(g: &AbGroup) -> Vec<IntJson> {
    ints(&g.invariant_factors())
}
