//! Homomorphisms between Cayley-table groups, and the backtracking
//! isomorphism search used for catalog deduplication.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};

/// A total map between finite groups, stored as an image array indexed by
/// domain element.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Homomorphism {
    pub image: Vec<usize>,
}

impl Homomorphism {
    /// Validated constructor: checks totality, range, and the
    /// homomorphism law on every pair.
    pub fn new(domain: &FiniteGroup, codomain: &FiniteGroup, image: Vec<usize>) -> Result<Self> {
        let h = Homomorphism { image };
        h.validate(domain, codomain)?;
        Ok(h)
    }

    pub(crate) fn new_unchecked(image: Vec<usize>) -> Self {
        Homomorphism { image }
    }

    pub fn identity(order: usize) -> Self {
        Homomorphism {
            image: (0..order).collect(),
        }
    }

    pub fn trivial(domain_order: usize) -> Self {
        Homomorphism {
            image: vec![0; domain_order],
        }
    }

    pub fn validate(&self, domain: &FiniteGroup, codomain: &FiniteGroup) -> Result<()> {
        if self.image.len() != domain.order() {
            return Err(Error::NotAGroup {
                axiom: "homomorphism totality".into(),
                witness: format!(
                    "image array has length {}, domain order {}",
                    self.image.len(),
                    domain.order()
                ),
            });
        }
        for &v in &self.image {
            codomain.check_index(v)?;
        }
        if self.image[0] != 0 {
            return Err(Error::NotAGroup {
                axiom: "homomorphism".into(),
                witness: "identity not mapped to identity".into(),
            });
        }
        for x in 0..domain.order() {
            for y in 0..domain.order() {
                if self.image[domain.mul(x, y)] != codomain.mul(self.image[x], self.image[y]) {
                    return Err(Error::NotAGroup {
                        axiom: "homomorphism".into(),
                        witness: format!("fails at pair ({x}, {y})"),
                    });
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    /// `self` then `other`.
    pub fn compose(&self, other: &Homomorphism) -> Homomorphism {
        Homomorphism {
            image: self.image.iter().map(|&x| other.image[x]).collect(),
        }
    }

    pub fn kernel(&self, domain: &FiniteGroup) -> Subgroup {
        let elements: Vec<usize> = (0..domain.order()).filter(|&x| self.image[x] == 0).collect();
        Subgroup {
            generators: elements.iter().copied().filter(|&x| x != 0).collect(),
            elements,
        }
    }

    pub fn image_subgroup(&self) -> Subgroup {
        let mut elements = self.image.clone();
        elements.sort_unstable();
        elements.dedup();
        Subgroup {
            generators: elements.iter().copied().filter(|&x| x != 0).collect(),
            elements,
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        self.image.iter().all(|&v| seen.insert(v))
    }

    pub fn is_surjective(&self, codomain_order: usize) -> bool {
        let mut seen = vec![false; codomain_order];
        for &v in &self.image {
            seen[v] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn agrees_with_on(&self, other: &Homomorphism, elements: &[usize]) -> bool {
        elements.iter().all(|&x| self.image[x] == other.image[x])
    }
}

/// Extends a map defined on `gens` to the subgroup they generate, checking
/// the homomorphism law incrementally. Returns the partial image array
/// (`usize::MAX` marks elements outside the span) or `None` on conflict.
///
/// Every pair of spanned elements is checked exactly once, so when the span
/// is the whole domain the result is a verified homomorphism.
pub(crate) fn extend_generator_images(
    domain: &FiniteGroup,
    codomain: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<usize>> {
    const UNSET: usize = usize::MAX;
    let mut img = vec![UNSET; domain.order()];
    img[0] = 0;
    let mut known: Vec<usize> = vec![0];
    let mut queue: Vec<usize> = Vec::new();
    for (&g, &im) in gens.iter().zip(images) {
        if img[g] == UNSET {
            img[g] = im;
            known.push(g);
            queue.push(g);
        } else if img[g] != im {
            return None;
        }
    }
    let mut qi = 0;
    while qi < queue.len() {
        let x = queue[qi];
        qi += 1;
        let mut i = 0;
        while i < known.len() {
            let y = known[i];
            i += 1;
            for (p, pi) in [
                (domain.mul(x, y), codomain.mul(img[x], img[y])),
                (domain.mul(y, x), codomain.mul(img[y], img[x])),
            ] {
                if img[p] == UNSET {
                    img[p] = pi;
                    known.push(p);
                    queue.push(p);
                } else if img[p] != pi {
                    return None;
                }
            }
        }
    }
    Some(img)
}

/// Backtracking isomorphism search over generator images with
/// order-profile pruning. Returns a witness isomorphism or `None`.
pub fn isomorphic(g1: &FiniteGroup, g2: &FiniteGroup) -> Option<Homomorphism> {
    if g1.order() != g2.order() {
        return None;
    }
    if g1.order_profile() != g2.order_profile() {
        return None;
    }
    let gens = g1.small_generating_set();
    if gens.is_empty() {
        return Some(Homomorphism::identity(1));
    }
    // candidate images per generator: same element order
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let o = g1.element_order(g);
            (0..g2.order())
                .filter(|&c| g2.element_order(c) == o)
                .collect()
        })
        .collect();
    let mut images = vec![0usize; gens.len()];
    search_iso(g1, g2, &gens, &candidates, &mut images, 0)
}

fn search_iso(
    g1: &FiniteGroup,
    g2: &FiniteGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
    depth: usize,
) -> Option<Homomorphism> {
    if depth == gens.len() {
        let img = extend_generator_images(g1, g2, gens, images)?;
        if img.iter().any(|&v| v == usize::MAX) {
            return None;
        }
        let hom = Homomorphism { image: img };
        if hom.is_injective() {
            debug_assert!(hom.validate(g1, g2).is_ok());
            return Some(hom);
        }
        return None;
    }
    for &cand in &candidates[depth] {
        images[depth] = cand;
        // incremental consistency on the prefix
        if extend_generator_images(g1, g2, &gens[..=depth], &images[..=depth]).is_none() {
            continue;
        }
        if let Some(found) = search_iso(g1, g2, gens, candidates, images, depth + 1) {
            return Some(found);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{closure, direct_product};
    use crate::limits::Limits;
    use crate::named::{cyclic, dihedral, klein, quaternion8, symmetric};

    #[test]
    fn isomorphic_examples() {
        let c4 = cyclic(4);
        assert!(isomorphic(&c4, &c4).is_some());
        assert!(isomorphic(&c4, &klein()).is_none());
        let s3 = symmetric(3);
        assert!(isomorphic(&s3, &cyclic(6)).is_none());
        assert!(isomorphic(&dihedral(4), &quaternion8()).is_none());
        let limits = Limits::default();
        let c2xc3 = direct_product(&cyclic(2), &cyclic(3), &limits).unwrap().0;
        let witness = isomorphic(&c2xc3, &cyclic(6)).unwrap();
        witness.validate(&c2xc3, &cyclic(6)).unwrap();
        assert!(witness.is_injective());
    }

    #[test]
    fn kernel_and_image() {
        let c4 = cyclic(4);
        let c2 = cyclic(2);
        let onto = Homomorphism::new(&c4, &c2, vec![0, 1, 0, 1]).unwrap();
        assert_eq!(onto.kernel(&c4).elements, vec![0, 2]);
        assert!(onto.is_surjective(2));
        assert!(!onto.is_injective());
        let triv = Homomorphism::trivial(4);
        assert_eq!(triv.image_subgroup().elements, vec![0]);
        assert!(Homomorphism::new(&c4, &c2, vec![0, 1, 1, 0]).is_err());
    }

    #[test]
    fn compose_and_agree() {
        let c4 = cyclic(4);
        let c2 = cyclic(2);
        let onto = Homomorphism::new(&c4, &c2, vec![0, 1, 0, 1]).unwrap();
        let id2 = Homomorphism::identity(2);
        assert_eq!(onto.compose(&id2), onto);
        let sq = closure(&c4, &[2]).unwrap();
        assert!(onto.agrees_with_on(&Homomorphism::trivial(4), &sq.elements));
    }
}
