//! Exhaustive homomorphism enumeration, agreeing pairs, equalizers, and
//! catalog-based dominion upper approximations.
//!
//! The enumeration realizes the "for all maps into all catalog targets"
//! quantifier of the dominion definition at desk scale; the result is an
//! upper bound (a superset) of the true dominion over the infinite variety.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::hom::{extend_generator_images, Homomorphism};
use crate::limits::Limits;
use crate::words::{is_member, VarietyPresentation};

/// Two homomorphisms with a common domain and codomain that agree on the
/// constraint subgroup.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct HomPair {
    pub f: Homomorphism,
    pub g: Homomorphism,
}

impl HomPair {
    pub fn agrees_on(&self, elements: &[usize]) -> bool {
        self.f.agrees_with_on(&self.g, elements)
    }
}

/// Catalog upper approximation of a dominion.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ApproxResult {
    pub subgroup: Subgroup,
    /// `(target index in the catalog, pair)` for every pair that strictly
    /// shrank the running intersection, for audit.
    pub contributing_pairs: Vec<(usize, HomPair)>,
    pub catalog_fingerprint: String,
    /// An empty catalog yields the whole group; that result carries no
    /// evidence and is flagged so certification never trusts it.
    pub vacuous: bool,
}

/// All homomorphisms from `g` to `c`, complete and duplicate-free.
///
/// Backtracking over images of a generating set (greedy, descending element
/// order), pruning candidates whose order does not divide the generator's
/// order, with incremental relation checking against the Cayley table.
pub fn enumerate_homs(g: &FiniteGroup, c: &FiniteGroup, limits: &Limits) -> Result<Vec<Homomorphism>> {
    let gens = g.small_generating_set();
    if gens.is_empty() {
        return Ok(vec![Homomorphism::trivial(1)]);
    }
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&gen| {
            let o = g.element_order(gen);
            (0..c.order())
                .filter(|&x| o % c.element_order(x) == 0)
                .collect()
        })
        .collect();
    let mut found: Vec<Homomorphism> = Vec::new();
    let mut images = vec![0usize; gens.len()];
    let mut nodes: u64 = 0;
    backtrack_homs(
        g,
        c,
        &gens,
        &candidates,
        &mut images,
        0,
        &mut nodes,
        limits,
        &mut found,
    )?;
    found.sort_by(|a, b| a.image.cmp(&b.image));
    found.dedup();
    Ok(found)
}

#[allow(clippy::too_many_arguments)]
fn backtrack_homs(
    g: &FiniteGroup,
    c: &FiniteGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
    depth: usize,
    nodes: &mut u64,
    limits: &Limits,
    found: &mut Vec<Homomorphism>,
) -> Result<()> {
    if depth == gens.len() {
        if let Some(img) = extend_generator_images(g, c, gens, images) {
            debug_assert!(img.iter().all(|&v| v != usize::MAX));
            found.push(Homomorphism { image: img });
        }
        return Ok(());
    }
    for &cand in &candidates[depth] {
        *nodes += 1;
        if *nodes > limits.node_budget {
            return Err(Error::BudgetExhausted {
                nodes: *nodes,
                context: format!(
                    "homomorphism enumeration |G|={} |C|={}",
                    g.order(),
                    c.order()
                ),
            });
        }
        images[depth] = cand;
        if extend_generator_images(g, c, &gens[..=depth], &images[..=depth]).is_none() {
            continue;
        }
        backtrack_homs(g, c, gens, candidates, images, depth + 1, nodes, limits, found)?;
    }
    Ok(())
}

/// Exactly the pairs `(f, g)` with `f|_H = g|_H`, deduplicated by
/// unordered pair (the reversed pair has the identical equalizer).
/// Diagonal pairs `(f, f)` are included.
pub fn agreeing_pairs(
    g: &FiniteGroup,
    c: &FiniteGroup,
    h: &Subgroup,
    limits: &Limits,
) -> Result<Vec<HomPair>> {
    h.validate(g, "H")?;
    let homs = enumerate_homs(g, c, limits)?;
    let mut out = Vec::new();
    for (i, f) in homs.iter().enumerate() {
        for gg in &homs[i..] {
            if f.agrees_with_on(gg, &h.elements) {
                out.push(HomPair {
                    f: f.clone(),
                    g: gg.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// `{ x : f(x) = g(x) }` — always a subgroup containing the constraint.
pub fn equalizer(g: &FiniteGroup, pair: &HomPair) -> Subgroup {
    let elements: Vec<usize> = (0..g.order())
        .filter(|&x| pair.f.image[x] == pair.g.image[x])
        .collect();
    Subgroup {
        generators: elements.iter().copied().filter(|&x| x != 0).collect(),
        elements,
    }
}

pub fn catalog_fingerprint(catalog: &Catalog) -> String {
    let mut hasher = Sha256::new();
    for entry in &catalog.entries {
        hasher.update((entry.group.order() as u64).to_le_bytes());
        for &v in entry.group.table() {
            hasher.update(v.to_le_bytes());
        }
    }
    format!("{:x}", hasher.finalize())
}

/// Intersection over all catalog targets and all agreeing pairs of their
/// equalizers. Every catalog member is re-validated against `v` first
/// (validated, not trusted). The result contains `h` and is independent of
/// catalog iteration order.
pub fn dominion_upper_approx(
    g: &FiniteGroup,
    h: &Subgroup,
    v: &VarietyPresentation,
    catalog: &Catalog,
    limits: &Limits,
) -> Result<ApproxResult> {
    h.validate(g, "H")?;
    for entry in &catalog.entries {
        if !is_member(&entry.group, v, limits)? {
            return Err(Error::MembershipFailed {
                member: entry.provenance.clone(),
                variety: v.name().into(),
            });
        }
    }
    let fingerprint = catalog_fingerprint(catalog);
    if catalog.entries.is_empty() {
        return Ok(ApproxResult {
            subgroup: Subgroup::whole(g),
            contributing_pairs: vec![],
            catalog_fingerprint: fingerprint,
            vacuous: true,
        });
    }
    // Per target: keep only the pairs that strictly shrank that target's
    // running intersection. Dropping the others cannot change the final
    // intersection, and it keeps the audit trail small.
    let per_target: Vec<Result<Vec<(HomPair, Subgroup)>>> = catalog
        .entries
        .par_iter()
        .map(|entry| {
            let pairs = agreeing_pairs(g, &entry.group, h, limits)?;
            let mut running = Subgroup::whole(g);
            let mut kept = Vec::new();
            for pair in pairs {
                let eq = equalizer(g, &pair);
                let shrunk = running.intersect(&eq);
                if shrunk.elements != running.elements {
                    running = shrunk;
                    kept.push((pair, eq));
                }
                if running.elements == h.elements {
                    break;
                }
            }
            Ok(kept)
        })
        .collect();
    let mut approx = Subgroup::whole(g);
    let mut contributing = Vec::new();
    for (target_idx, kept) in per_target.into_iter().enumerate() {
        for (pair, eq) in kept? {
            let shrunk = approx.intersect(&eq);
            if shrunk.elements != approx.elements {
                approx = shrunk;
                contributing.push((target_idx, pair));
            }
        }
        if approx.elements == h.elements {
            break;
        }
    }
    debug_assert!(h.is_subset_of(&approx));
    Ok(ApproxResult {
        subgroup: approx,
        contributing_pairs: contributing,
        catalog_fingerprint: fingerprint,
        vacuous: false,
    })
}
