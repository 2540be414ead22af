//! Finite permutation groups and their subgroup lattices.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::{Error, Guards, Result};

/// A permutation of `0..degree`, stored as its image list.
pub type Perm = Vec<u8>;

/// Subgroup of a [`PermGroup`], as a set of element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    pub canonical_id: usize,
    members: BitSet,
}

impl Subgroup {
    pub fn members(&self) -> &BitSet {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.count()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.contains(g)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }
}

/// A finite group of permutations with every element enumerated.
///
/// Elements are sorted lexicographically by image list, so index 0 is the
/// identity. Products read left to right: `mul(a, b)` applies `a` first.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: BTreeMap<Perm, usize>,
    table: Vec<u16>,
    inverse: Vec<u16>,
    name: Option<String>,
    subgroups: Vec<Subgroup>,
    subgroup_ids: BTreeMap<BitSet, usize>,
}

fn compose(a: &[u8], b: &[u8]) -> Perm {
    a.iter().map(|&i| b[i as usize]).collect()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Largest power of `p` dividing `n`.
pub fn p_part(n: usize, p: u64) -> usize {
    let p = p as usize;
    let mut out = 1;
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
        out *= p;
    }
    out
}

impl PermGroup {
    /// Enumerates the group generated by `generators` on `degree` points.
    pub fn generate(degree: usize, generators: Vec<Perm>, name: Option<String>, guards: &Guards) -> Result<Self> {
        if degree == 0 || degree > guards.max_degree.min(256) {
            return Err(Error::DegreeGuardExceeded { degree, limit: guards.max_degree });
        }
        for g in &generators {
            let mut seen = vec![false; degree];
            if g.len() != degree {
                return Err(Error::MalformedPermutation(format!("{g:?} has the wrong degree")));
            }
            for &x in g {
                if x as usize >= degree || seen[x as usize] {
                    return Err(Error::MalformedPermutation(format!("{g:?} is not a bijection")));
                }
                seen[x as usize] = true;
            }
        }
        let id: Perm = (0..degree as u8).collect();
        let mut found: BTreeSet<Perm> = BTreeSet::new();
        let mut queue = VecDeque::new();
        found.insert(id.clone());
        queue.push_back(id);
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = compose(&x, g);
                if found.insert(y.clone()) {
                    if found.len() > guards.max_order {
                        return Err(Error::OrderGuardExceeded { limit: guards.max_order });
                    }
                    queue.push_back(y);
                }
            }
        }
        let elements: Vec<Perm> = found.into_iter().collect();
        let n = elements.len();
        let index: BTreeMap<Perm, usize> = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut table = vec![0u16; n * n];
        let mut inverse = vec![0u16; n];
        for a in 0..n {
            for b in 0..n {
                let c = index[&compose(&elements[a], &elements[b])];
                table[a * n + b] = c as u16;
                if c == 0 {
                    inverse[a] = b as u16;
                }
            }
        }
        let mut g = PermGroup {
            degree,
            generators,
            elements,
            index,
            table,
            inverse,
            name,
            subgroups: Vec::new(),
            subgroup_ids: BTreeMap::new(),
        };
        g.enumerate_subgroups();
        Ok(g)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &[u8]) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// `a · b`, applying `a` first.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `g⁻¹ · h · g`
    pub fn conj(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), h), g)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Closure of a set of elements under multiplication.
    pub fn closure(&self, gens: &[usize]) -> BitSet {
        let mut set = BitSet::new(self.order());
        set.insert(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set
    }

    fn enumerate_subgroups(&mut self) {
        let n = self.order();
        let mut found: BTreeMap<BitSet, Vec<usize>> = BTreeMap::new();
        let trivial = self.closure(&[]);
        found.insert(trivial.clone(), Vec::new());
        let mut frontier = vec![trivial];
        while let Some(h) = frontier.pop() {
            let gens = found[&h].clone();
            for g in 0..n {
                if h.contains(g) {
                    continue;
                }
                let mut kg = gens.clone();
                kg.push(g);
                let k = self.closure(&kg);
                if !found.contains_key(&k) {
                    found.insert(k.clone(), kg);
                    frontier.push(k);
                }
            }
        }
        let mut all: Vec<BitSet> = found.into_keys().collect();
        all.sort_by(|a, b| a.count().cmp(&b.count()).then_with(|| a.cmp(b)));
        self.subgroup_ids = all.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        self.subgroups =
            all.into_iter().enumerate().map(|(canonical_id, members)| Subgroup { canonical_id, members }).collect();
    }

    /// All subgroups sorted by order, then by member list.
    pub fn all_subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn subgroup(&self, id: usize) -> &Subgroup {
        &self.subgroups[id]
    }

    pub fn subgroup_by_members(&self, members: &BitSet) -> Option<&Subgroup> {
        self.subgroup_ids.get(members).map(|&i| &self.subgroups[i])
    }

    pub fn trivial_subgroup(&self) -> &Subgroup {
        &self.subgroups[0]
    }

    pub fn whole(&self) -> &Subgroup {
        self.subgroups.last().expect("a group has subgroups")
    }

    /// `g⁻¹ H g`
    pub fn conjugate(&self, h: &Subgroup, g: usize) -> &Subgroup {
        let m = BitSet::from_indices(self.order(), h.members.iter().map(|x| self.conj(x, g)));
        self.subgroup_by_members(&m).expect("conjugates are subgroups")
    }

    pub fn normalizer(&self, h: &Subgroup) -> &Subgroup {
        let m = BitSet::from_indices(
            self.order(),
            (0..self.order()).filter(|&g| self.conjugate(h, g).canonical_id == h.canonical_id),
        );
        self.subgroup_by_members(&m).expect("normalizers are subgroups")
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.normalizer(h).order() == self.order()
    }

    /// The Sylow `p`-subgroup of `h` with least canonical id.
    pub fn sylow_subgroup(&self, h: &Subgroup, p: u64) -> Result<&Subgroup> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let target = p_part(h.order(), p);
        Ok(self
            .sylow_subgroups(h, p)
            .into_iter()
            .next()
            .filter(|s| s.order() == target)
            .expect("Sylow subgroups exist"))
    }

    /// Every Sylow `p`-subgroup of `h`, in canonical order.
    pub fn sylow_subgroups(&self, h: &Subgroup, p: u64) -> Vec<&Subgroup> {
        let target = p_part(h.order(), p);
        self.subgroups.iter().filter(|s| s.order() == target && s.is_subgroup_of(h)).collect()
    }

    pub fn is_p_subgroup(&self, h: &Subgroup, p: u64) -> bool {
        p_part(h.order(), p) == h.order()
    }

    /// Whether `p` does not divide `[H : K]`.
    pub fn p_part_coprime_index(&self, h: &Subgroup, k: &Subgroup, p: u64) -> Result<bool> {
        if !k.is_subgroup_of(h) {
            return Err(Error::NotASubgroupPair);
        }
        Ok(!((h.order() / k.order()) as u64).is_multiple_of(p))
    }

    /// Cycle notation of an element, `()` for the identity.
    pub fn cycle_string(&self, i: usize) -> String {
        cycle_string(&self.elements[i])
    }
}

pub fn cycle_string(p: &[u8]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for s in 0..p.len() {
        if seen[s] || p[s] as usize == s {
            continue;
        }
        out.push('(');
        let mut x = s;
        let mut first = true;
        while !seen[x] {
            seen[x] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&x.to_string());
            first = false;
            x = p[x] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// Parses one permutation in cycle notation, e.g. `(0 1 2)(3 4)`.
pub fn parse_cycles(s: &str, degree: usize) -> Result<Perm> {
    let bad = || Error::MalformedPermutation(s.to_string());
    let mut perm: Perm = (0..degree as u8).collect();
    let mut rest = s.trim();
    if rest.is_empty() {
        return Err(bad());
    }
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(bad)?;
        let close = body.find(')').ok_or_else(bad)?;
        let pts: Vec<usize> = body[..close]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let mut distinct = BTreeSet::new();
        for &x in &pts {
            if x >= degree || !distinct.insert(x) {
                return Err(bad());
            }
        }
        let mut cyc: Perm = (0..degree as u8).collect();
        for (k, &x) in pts.iter().enumerate() {
            cyc[x] = pts[(k + 1) % pts.len()] as u8;
        }
        perm = compose(&perm, &cyc);
        rest = body[close + 1..].trim_start();
    }
    Ok(perm)
}

fn cycle(n: usize) -> Perm {
    (0..n).map(|i| ((i + 1) % n) as u8).collect()
}

fn transposition(n: usize, a: usize, b: usize) -> Perm {
    let mut p: Perm = (0..n as u8).collect();
    p.swap(a, b);
    p
}

fn catalog(name: &str) -> Result<(usize, Vec<Perm>)> {
    let bad = || Error::BadDescriptor(name.to_string());
    let lower = name.trim().to_ascii_lowercase();
    let words: Vec<&str> = lower.split_whitespace().collect();
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    let (kind, n) = match words.as_slice() {
        ["klein", "four"] | ["klein"] => ("klein", 4),
        [k, n] => (*k, num(n)?),
        [short] => {
            let (k, rest) = short.split_at(1);
            match k {
                "c" => ("cyclic", num(rest)?),
                "s" => ("symmetric", num(rest)?),
                "a" => ("alternating", num(rest)?),
                "q" => ("quaternion", num(rest)?),
                "v" if rest == "4" => ("klein", 4),
                "d" => {
                    let m = num(rest)?;
                    if m % 2 != 0 || m < 2 {
                        return Err(bad());
                    }
                    ("dihedral", m / 2)
                }
                _ => return Err(bad()),
            }
        }
        _ => return Err(bad()),
    };
    if n == 0 {
        return Err(bad());
    }
    Ok(match kind {
        "cyclic" => (n, if n == 1 { vec![] } else { vec![cycle(n)] }),
        "symmetric" => match n {
            1 => (1, vec![]),
            2 => (2, vec![cycle(2)]),
            _ => (n, vec![cycle(n), transposition(n, 0, 1)]),
        },
        "alternating" => {
            if n < 3 {
                (n, vec![])
            } else {
                let gens = (2..n)
                    .map(|i| {
                        let mut p: Perm = (0..n as u8).collect();
                        p[0] = 1;
                        p[1] = i as u8;
                        p[i] = 0;
                        p
                    })
                    .collect();
                (n, gens)
            }
        }
        "dihedral" => match n {
            1 => (2, vec![cycle(2)]),
            2 => (4, vec![transposition(4, 0, 1), transposition(4, 2, 3)]),
            _ => {
                let refl: Perm = (0..n).map(|i| ((n - i) % n) as u8).collect();
                (n, vec![cycle(n), refl])
            }
        },
        "klein" if n == 4 => (4, vec![transposition(4, 0, 1), transposition(4, 2, 3)]),
        "quaternion" if n == 8 => quaternion_regular(),
        _ => return Err(bad()),
    })
}

/// Q8 in its left regular representation; points `2u + s` encode `±u`.
fn quaternion_regular() -> (usize, Vec<Perm>) {
    // unit products: units 1, i, j, k as 0..4; returns (sign, unit)
    fn unit_mul(a: usize, b: usize) -> (bool, usize) {
        const T: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        T[a][b]
    }
    let left = |u: usize| -> Perm {
        (0..8)
            .map(|pt| {
                let (neg, v) = (pt % 2 == 1, pt / 2);
                let (s, w) = unit_mul(u, v);
                (2 * w + usize::from(neg ^ s)) as u8
            })
            .collect()
    };
    (8, vec![left(1), left(2)])
}

fn explicit(spec: &str) -> Result<(usize, Vec<Perm>)> {
    let bad = || Error::BadDescriptor(spec.to_string());
    let body = spec.trim();
    let (degree, list) = match body.strip_prefix("gens") {
        Some(rest) => {
            let (d, l) = rest.split_once(':').ok_or_else(bad)?;
            (Some(d.trim().parse::<usize>().map_err(|_| bad())?), l)
        }
        None => (None, body),
    };
    let parts: Vec<&str> = list.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    let degree = match degree {
        Some(d) => d,
        None => {
            let mut m = 0;
            for p in &parts {
                for t in p.split(|c: char| !c.is_ascii_digit()).filter(|t| !t.is_empty()) {
                    m = m.max(t.parse::<usize>().map_err(|_| bad())? + 1);
                }
            }
            m.max(1)
        }
    };
    let gens = parts.iter().map(|p| parse_cycles(p, degree)).collect::<Result<Vec<_>>>()?;
    Ok((degree, gens))
}

/// Builds a group from a descriptor.
///
/// Accepted forms: `cyclic n`, `dihedral n` (the symmetries of an `n`-gon,
/// order `2n`), `symmetric n`, `alternating n`, `quaternion 8`, `klein four`,
/// the short names `Cn`, `Sn`, `An`, `D2n`, `Q8`, `V4`, direct products
/// joined by ` x `, and explicit generators `gens 4: (0 1 2 3), (0 2)` (the
/// `gens d:` prefix may be omitted, in which case the degree is inferred).
pub fn group_from_spec(spec: &str, guards: &Guards) -> Result<PermGroup> {
    let factors: Vec<&str> = if spec.contains('(') { vec![spec] } else { spec.split(" x ").collect() };
    let mut degree = 0;
    let mut gens: Vec<Perm> = Vec::new();
    let mut parts = Vec::new();
    for f in &factors {
        let (d, g) = if f.contains('(') { explicit(f)? } else { catalog(f)? };
        parts.push((d, g));
    }
    let total: usize = parts.iter().map(|(d, _)| d).sum();
    if total > guards.max_degree {
        return Err(Error::DegreeGuardExceeded { degree: total, limit: guards.max_degree });
    }
    for (d, g) in parts {
        for p in g {
            let mut full: Perm = (0..total as u8).collect();
            for (i, &x) in p.iter().enumerate() {
                full[degree + i] = degree as u8 + x;
            }
            gens.push(full);
        }
        degree += d;
    }
    PermGroup::generate(degree, gens, Some(spec.trim().to_string()), guards)
}
