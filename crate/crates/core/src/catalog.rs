//! Catalogs of small groups in a given variety: build, deduplicate, persist.
//!
//! A catalog realizes the "for all groups in the variety" quantifier at desk
//! scale: it is the set of homomorphism targets for the dominion upper
//! approximation, and doubles as the (G, H) query corpus for candidate hunts.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{
    all_subgroups, direct_product, is_normal, quotient, semidirect_product, FiniteGroup,
};
use crate::hom::isomorphic;
use crate::homsearch::enumerate_homs;
use crate::limits::Limits;
use crate::named::{cyclic, dihedral};
use crate::words::{is_member, VarietyPresentation};

/// One catalog member with a human-readable construction expression and
/// cached variety-membership verdicts (re-checked, never trusted, by
/// consumers that need them).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub group: FiniteGroup,
    pub provenance: String,
    pub memberships: BTreeMap<String, bool>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Which constructors `build_catalog` applies. All enabled by default.
#[derive(Clone, Copy, Debug)]
pub struct ConstructorSet {
    pub cyclic: bool,
    pub dihedral: bool,
    pub direct_products: bool,
    pub semidirect_products: bool,
    pub wreath_products: bool,
    pub quotients: bool,
}

impl Default for ConstructorSet {
    fn default() -> Self {
        ConstructorSet {
            cyclic: true,
            dihedral: true,
            direct_products: true,
            semidirect_products: true,
            wreath_products: true,
            quotients: true,
        }
    }
}

/// All automorphisms of `n`, as the complete set of bijective endomorphisms.
pub fn automorphisms(n: &FiniteGroup, limits: &Limits) -> Result<Vec<Vec<u32>>> {
    let homs = enumerate_homs(n, n, limits)?;
    Ok(homs
        .into_iter()
        .filter(|h| h.is_injective())
        .map(|h| h.image.iter().map(|&v| v as u32).collect())
        .collect())
}

/// `Aut(N)` as a concrete group under "apply `a`, then `b`" composition,
/// with the identity automorphism at index 0. Also returns the
/// automorphism permutations in index order.
pub fn automorphism_group(
    n: &FiniteGroup,
    limits: &Limits,
) -> Result<(FiniteGroup, Vec<Vec<u32>>)> {
    let mut autos = automorphisms(n, limits)?;
    // enumerate_homs sorts by image, so the identity need not be first
    let id_pos = autos
        .iter()
        .position(|a| a.iter().enumerate().all(|(i, &v)| v as usize == i))
        .expect("identity automorphism");
    autos.swap(0, id_pos);
    let index: std::collections::HashMap<&[u32], usize> = autos
        .iter()
        .enumerate()
        .map(|(i, a)| (a.as_slice(), i))
        .collect();
    let m = autos.len();
    let mut table = vec![0u32; m * m];
    for (a, pa) in autos.iter().enumerate() {
        for (b, pb) in autos.iter().enumerate() {
            let comp: Vec<u32> = (0..pa.len()).map(|x| pb[pa[x] as usize]).collect();
            table[a * m + b] = index[comp.as_slice()] as u32;
        }
    }
    Ok((FiniteGroup::from_table_trusted(m, table, None, None), autos))
}

fn entry(group: FiniteGroup, provenance: String, variety: &str) -> CatalogEntry {
    let mut memberships = BTreeMap::new();
    memberships.insert(variety.to_string(), true);
    CatalogEntry {
        group,
        provenance,
        memberships,
    }
}

/// Generates groups from the enabled constructors, keeps those in `v` with
/// order at most `max_order`, deduplicates up to isomorphism, and sorts by
/// `(order, provenance)`. Constructions that would exceed the order cap are
/// silently skipped; they are candidates, not requirements.
pub fn build_catalog(
    v: &VarietyPresentation,
    max_order: usize,
    constructors: &ConstructorSet,
    limits: &Limits,
) -> Result<Catalog> {
    v.validate()?;
    limits.check_order(max_order as u128)?;
    let mut candidates: Vec<(String, FiniteGroup)> = Vec::new();
    if constructors.cyclic {
        for m in 1..=max_order {
            candidates.push((format!("cyclic({m})"), cyclic(m)));
        }
    }
    if constructors.dihedral {
        for m in 3..=max_order / 2 {
            candidates.push((format!("dihedral({m})"), dihedral(m)));
        }
    }
    // seeds for the compound constructors: everything so far, small first
    let seeds: Vec<(String, FiniteGroup)> = candidates
        .iter()
        .filter(|(_, g)| g.order() > 1 && g.order() <= max_order / 2)
        .cloned()
        .collect();
    if constructors.direct_products {
        for (pa, a) in &seeds {
            for (pb, b) in &seeds {
                if a.order() * b.order() > max_order {
                    continue;
                }
                let (p, _, _) = direct_product(a, b, limits)?;
                // iterate once more for three-factor products (C2^3 etc.)
                for (pc, c) in &seeds {
                    if p.order() * c.order() > max_order {
                        continue;
                    }
                    let (q, _, _) = direct_product(&p, c, limits)?;
                    candidates.push((format!("direct(direct({pa},{pb}),{pc})"), q));
                }
                candidates.push((format!("direct({pa},{pb})"), p));
            }
        }
    }
    if constructors.semidirect_products {
        let mut semis: Vec<(String, FiniteGroup)> = seeds
            .par_iter()
            .flat_map(|(pn, n)| {
                let mut local = Vec::new();
                if n.order() > 16 {
                    return local;
                }
                let Ok((aut, autos)) = automorphism_group(n, limits) else {
                    return local;
                };
                for (pk, k) in &seeds {
                    if k.order() > 16 || n.order() * k.order() > max_order {
                        continue;
                    }
                    let Ok(homs) = enumerate_homs(k, &aut, limits) else {
                        continue;
                    };
                    for (hi, h) in homs.iter().enumerate() {
                        let action: Vec<Vec<u32>> =
                            h.image.iter().map(|&a| autos[a].clone()).collect();
                        if let Ok((p, _, _)) = semidirect_product(n, k, &action, limits) {
                            local.push((format!("semidirect({pn},{pk},a{hi})"), p));
                        }
                    }
                }
                local
            })
            .collect();
        candidates.append(&mut semis);
    }
    if constructors.wreath_products {
        for (pn, n) in &seeds {
            for (pk, k) in &seeds {
                let flat = (n.order() as u128)
                    .checked_pow(k.order() as u32)
                    .map(|b| b * k.order() as u128);
                if flat.is_none_or(|f| f > max_order as u128) {
                    continue;
                }
                let w = crate::construct::regular_wreath(n, k, limits)?;
                candidates.push((format!("wreath({pn},{pk})"), w.flat));
            }
        }
    }
    if constructors.quotients {
        let base: Vec<(String, FiniteGroup)> = candidates
            .iter()
            .filter(|(_, g)| g.order() > 2 && g.order() <= 32)
            .cloned()
            .collect();
        for (pg, g) in &base {
            for s in all_subgroups(g) {
                if s.order() == 1 || s.order() == g.order() {
                    continue;
                }
                if !is_normal(g, &s)? {
                    continue;
                }
                let (q, _) = quotient(g, &s)?;
                candidates.push((format!("quotient({pg},|{}|)", s.order()), q));
            }
        }
    }

    // membership filter, parallel per candidate
    let admitted: Vec<Result<Option<(String, FiniteGroup)>>> = candidates
        .into_par_iter()
        .map(|(p, g)| {
            if g.order() > max_order {
                return Ok(None);
            }
            match is_member(&g, v, limits) {
                Ok(true) => Ok(Some((p, g))),
                Ok(false) => Ok(None),
                Err(e) if e.is_resource_exhaustion() => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect();
    let mut admitted: Vec<(String, FiniteGroup)> =
        admitted.into_iter().filter_map(Result::transpose).collect::<Result<_>>()?;
    admitted.sort_by(|(pa, a), (pb, b)| a.order().cmp(&b.order()).then(pa.cmp(pb)));

    // dedupe up to isomorphism (order-profile prefilter lives in `isomorphic`)
    let mut entries: Vec<CatalogEntry> = Vec::new();
    for (p, g) in admitted {
        if entries
            .iter()
            .any(|e| e.group.order() == g.order() && isomorphic(&e.group, &g).is_some())
        {
            continue;
        }
        entries.push(entry(g, p, v.name()));
    }
    Ok(Catalog { entries })
}

#[derive(Serialize, Deserialize)]
struct ManifestEntry {
    file: String,
    provenance: String,
    memberships: BTreeMap<String, bool>,
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    entries: Vec<ManifestEntry>,
}

/// Writes a catalog as a directory: `manifest.json` plus one group file per
/// entry.
pub fn save_catalog(catalog: &Catalog, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut manifest = Manifest { entries: vec![] };
    for (i, e) in catalog.entries.iter().enumerate() {
        let file = format!("group_{i:04}.json");
        crate::io::save_group(&dir.join(&file), &e.group)?;
        manifest.entries.push(ManifestEntry {
            file,
            provenance: e.provenance.clone(),
            memberships: e.memberships.clone(),
        });
    }
    let path = dir.join("manifest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest).unwrap()).map_err(|source| {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    })
}

/// Loads a catalog directory; every group file is re-validated against the
/// full group axioms (a corrupted table is rejected naming the axiom).
pub fn load_catalog(dir: &Path) -> Result<Catalog> {
    let path = dir.join("manifest.json");
    let text = std::fs::read_to_string(&path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|e| Error::Malformed {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut entries = Vec::new();
    for m in manifest.entries {
        let group = crate::io::load_group(&dir.join(&m.file))?;
        entries.push(CatalogEntry {
            group,
            provenance: m.provenance,
            memberships: m.memberships,
        });
    }
    Ok(Catalog { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::symmetric;

    #[test]
    fn abelian_catalog_up_to_8() {
        let limits = Limits::default();
        let cat = build_catalog(
            &VarietyPresentation::abelian(),
            8,
            &ConstructorSet::default(),
            &limits,
        )
        .unwrap();
        // C1,C2,C3,C4,C2xC2,C5,C6,C7,C8,C4xC2,C2^3 — classification of
        // abelian groups of order <= 8
        assert_eq!(cat.len(), 11);
        let orders: Vec<usize> = cat.entries.iter().map(|e| e.group.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 4, 4, 5, 6, 7, 8, 8, 8]);
        assert!(cat.entries.iter().all(|e| e.group.is_abelian()));
    }

    #[test]
    fn trivial_variety_catalog() {
        let limits = Limits::default();
        let v = VarietyPresentation::Basis {
            name: "trivial".into(),
            laws: vec![crate::words::parse_word("x1").unwrap()],
            declared_exponent: Some(1),
            contained_in: vec![],
        };
        let cat = build_catalog(&v, 12, &ConstructorSet::default(), &limits).unwrap();
        assert_eq!(cat.len(), 1);
        assert_eq!(cat.entries[0].group.order(), 1);
    }

    #[test]
    fn metabelian_catalog_includes_s3() {
        let limits = Limits::default();
        let cat = build_catalog(
            &VarietyPresentation::metabelian(),
            6,
            &ConstructorSet::default(),
            &limits,
        )
        .unwrap();
        let s3 = symmetric(3);
        assert!(cat
            .entries
            .iter()
            .any(|e| isomorphic(&e.group, &s3).is_some()));
    }

    #[test]
    fn wreath_c2_c2_is_d4 () {
        let limits = Limits::default();
        let w = crate::construct::regular_wreath(&cyclic(2), &cyclic(2), &limits).unwrap().flat;
        assert_eq!(w.order(), 8);
        assert!(isomorphic(&w, &dihedral(4)).is_some());
    }

    #[test]
    fn round_trip_and_corruption() {
        let limits = Limits::default();
        let cat = build_catalog(
            &VarietyPresentation::abelian(),
            6,
            &ConstructorSet::default(),
            &limits,
        )
        .unwrap();
        let dir = std::env::temp_dir().join("domkit-catalog-test");
        let _ = std::fs::remove_dir_all(&dir);
        save_catalog(&cat, &dir).unwrap();
        let back = load_catalog(&dir).unwrap();
        assert_eq!(back.len(), cat.len());
        for (a, b) in cat.entries.iter().zip(back.entries.iter()) {
            assert_eq!(a.group, b.group);
            assert_eq!(a.provenance, b.provenance);
            assert_eq!(a.memberships, b.memberships);
        }
        // corrupt one table entry: load must name the violated axiom
        let victim = dir.join("group_0001.json");
        let text = std::fs::read_to_string(&victim).unwrap();
        let mut file: crate::io::GroupFile = serde_json::from_str(&text).unwrap();
        file.table[1] = file.table[0];
        std::fs::write(&victim, serde_json::to_string(&file).unwrap()).unwrap();
        match load_catalog(&dir) {
            Err(Error::NotAGroup { .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        // missing file
        std::fs::remove_file(&victim).unwrap();
        assert!(matches!(load_catalog(&dir), Err(Error::Io { .. })));
    }

    #[test]
    fn automorphism_counts() {
        let limits = Limits::default();
        assert_eq!(automorphisms(&cyclic(5), &limits).unwrap().len(), 4);
        assert_eq!(automorphisms(&crate::named::klein(), &limits).unwrap().len(), 6);
        assert_eq!(automorphisms(&symmetric(3), &limits).unwrap().len(), 6);
    }
}
