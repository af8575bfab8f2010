//! Cayley-table groups and elementary structural operations.
//!
//! Conventions fixed once and relied upon everywhere:
//! - the identity is always element 0 (loaders re-index if needed);
//! - `table[a * order + b]` is the product `a * b` (row acts on the left);
//! - subgroup element sets are sorted index arrays, so set equality is
//!   plain `Vec` equality.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;

/// A finite group given by its full multiplication table.
///
/// Immutable after construction; all operations are pure functions.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    order: usize,
    /// Row-major: `table[a * order + b] = a * b`.
    table: Vec<u32>,
    inverses: Vec<u32>,
    pub labels: Option<Vec<String>>,
    pub generators: Option<Vec<usize>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order={})", self.order)
    }
}

impl FiniteGroup {
    /// Builds and fully validates a group from a row-major table.
    ///
    /// Rejects non-groups with a diagnostic naming the failed axiom and a
    /// witness. Expects the identity at index 0; see `crate::io` for the
    /// re-indexing loader.
    pub fn from_table(
        order: usize,
        table: Vec<u32>,
        labels: Option<Vec<String>>,
        generators: Option<Vec<usize>>,
    ) -> Result<Self> {
        if order == 0 {
            return Err(Error::NotAGroup {
                axiom: "nonempty".into(),
                witness: "order 0".into(),
            });
        }
        if table.len() != order * order {
            return Err(Error::NotAGroup {
                axiom: "closure".into(),
                witness: format!("table has {} entries, expected {}", table.len(), order * order),
            });
        }
        for (pos, &v) in table.iter().enumerate() {
            if v as usize >= order {
                return Err(Error::NotAGroup {
                    axiom: "closure".into(),
                    witness: format!(
                        "entry ({}, {}) = {} is not an element index",
                        pos / order,
                        pos % order,
                        v
                    ),
                });
            }
        }
        if let Some(ref l) = labels {
            if l.len() != order {
                return Err(Error::NotAGroup {
                    axiom: "labels".into(),
                    witness: format!("{} labels for order {}", l.len(), order),
                });
            }
        }
        if let Some(ref g) = generators {
            for &i in g {
                if i >= order {
                    return Err(Error::InvalidIndex { index: i, order });
                }
            }
        }
        // identity at index 0
        for a in 0..order {
            if table[a] as usize != a {
                return Err(Error::NotAGroup {
                    axiom: "identity".into(),
                    witness: format!("0 * {} = {}", a, table[a]),
                });
            }
            if table[a * order] as usize != a {
                return Err(Error::NotAGroup {
                    axiom: "identity".into(),
                    witness: format!("{} * 0 = {}", a, table[a * order]),
                });
            }
        }
        // two-sided inverses
        let mut inverses = vec![0u32; order];
        for a in 0..order {
            let mut found = None;
            for b in 0..order {
                if table[a * order + b] == 0 && table[b * order + a] == 0 {
                    found = Some(b as u32);
                    break;
                }
            }
            match found {
                Some(b) => inverses[a] = b,
                None => {
                    return Err(Error::NotAGroup {
                        axiom: "inverses".into(),
                        witness: format!("element {} has no two-sided inverse", a),
                    })
                }
            }
        }
        let g = FiniteGroup {
            order,
            table,
            inverses,
            labels,
            generators,
        };
        g.check_associativity()?;
        Ok(g)
    }

    /// Constructor for internal constructions whose tables are associative
    /// by construction (products, quotients, wreaths). Still computes
    /// inverses and debug-checks the identity.
    pub(crate) fn from_table_trusted(
        order: usize,
        table: Vec<u32>,
        labels: Option<Vec<String>>,
        generators: Option<Vec<usize>>,
    ) -> Self {
        debug_assert_eq!(table.len(), order * order);
        let mut inverses = vec![u32::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 {
                    inverses[a] = b as u32;
                    break;
                }
            }
        }
        debug_assert!(inverses.iter().all(|&x| x != u32::MAX));
        FiniteGroup {
            order,
            table,
            inverses,
            labels,
            generators,
        }
    }

    /// Exhaustive check for small orders, Light's test (over a generating
    /// set of the magma) for larger ones.
    fn check_associativity(&self) -> Result<()> {
        let n = self.order;
        if n <= 100 {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(Error::NotAGroup {
                                axiom: "associativity".into(),
                                witness: format!("({a} * {b}) * {c} != {a} * ({b} * {c})"),
                            });
                        }
                    }
                }
            }
            return Ok(());
        }
        // Light's test: associativity holds iff it holds with the middle
        // argument ranging over a generating set of the magma.
        let gens = self.small_generating_set();
        for &g in &gens {
            for a in 0..n {
                let ag = self.mul(a, g);
                for c in 0..n {
                    if self.mul(ag, c) != self.mul(a, self.mul(g, c)) {
                        return Err(Error::NotAGroup {
                            axiom: "associativity".into(),
                            witness: format!("({a} * {g}) * {c} != {a} * ({g} * {c})"),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Full axiom re-check (identity, inverses, associativity). Used by
    /// loaders and property tests.
    pub fn check_axioms(&self) -> Result<()> {
        let clone = FiniteGroup::from_table(
            self.order,
            self.table.clone(),
            self.labels.clone(),
            self.generators.clone(),
        )?;
        debug_assert_eq!(clone.inverses, self.inverses);
        Ok(())
    }

    pub fn trivial() -> Self {
        FiniteGroup::from_table_trusted(1, vec![0], None, None)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.order {
            Err(Error::InvalidIndex {
                index: i,
                order: self.order,
            })
        } else {
            Ok(())
        }
    }

    /// `a^k` for any integer exponent.
    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut e = k.unsigned_abs();
        let mut acc = 0usize;
        let mut cur = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, cur);
            }
            cur = self.mul(cur, cur);
            e >>= 1;
        }
        acc
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

    /// Multiset of element orders, used as an isomorphism invariant.
    pub fn order_profile(&self) -> BTreeMap<usize, usize> {
        let mut profile = BTreeMap::new();
        for a in 0..self.order {
            *profile.entry(self.element_order(a)).or_insert(0) += 1;
        }
        profile
    }

    pub fn is_abelian(&self) -> bool {
        for a in 0..self.order {
            for b in (a + 1)..self.order {
                if self.mul(a, b) != self.mul(b, a) {
                    return false;
                }
            }
        }
        true
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => format!("g{i}"),
        }
    }

    /// Greedy generating set, preferring elements of high order. Not
    /// guaranteed minimal, but small and deterministic.
    pub fn small_generating_set(&self) -> Vec<usize> {
        if self.order == 1 {
            return vec![];
        }
        let mut by_order: Vec<usize> = (1..self.order).collect();
        by_order.sort_by_key(|&a| (std::cmp::Reverse(self.element_order(a)), a));
        let mut gens = Vec::new();
        let mut span = vec![false; self.order];
        span[0] = true;
        let mut span_count = 1;
        for &cand in &by_order {
            if span[cand] {
                continue;
            }
            gens.push(cand);
            // rebuild span = closure of gens
            let sub = self.closure_unchecked(&gens);
            span = vec![false; self.order];
            span_count = sub.len();
            for &x in &sub {
                span[x] = true;
            }
            if span_count == self.order {
                break;
            }
        }
        debug_assert_eq!(span_count, self.order);
        gens
    }

    /// Product closure of a set; sorted. Internal, no index validation.
    pub(crate) fn closure_unchecked(&self, seed: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.order];
        in_set[0] = true;
        let mut members = vec![0usize];
        let mut queue: Vec<usize> = Vec::new();
        for &s in seed {
            if !in_set[s] {
                in_set[s] = true;
                members.push(s);
                queue.push(s);
            }
        }
        let mut qi = 0;
        while qi < queue.len() {
            let x = queue[qi];
            qi += 1;
            // multiplying by every current member from both sides
            let mut i = 0;
            while i < members.len() {
                let y = members[i];
                for p in [self.mul(x, y), self.mul(y, x)] {
                    if !in_set[p] {
                        in_set[p] = true;
                        members.push(p);
                        queue.push(p);
                    }
                }
                i += 1;
            }
        }
        members.sort_unstable();
        members
    }
}

/// A subgroup of some parent group, stored as a sorted index set together
/// with the generators it was built from.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Subgroup {
    pub elements: Vec<usize>,
    pub generators: Vec<usize>,
}

impl Subgroup {
    pub fn trivial() -> Self {
        Subgroup {
            elements: vec![0],
            generators: vec![],
        }
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        Subgroup {
            elements: (0..g.order()).collect(),
            generators: g.small_generating_set(),
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.elements.binary_search(&i).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements == [0]
    }

    pub fn is_whole(&self, g: &FiniteGroup) -> bool {
        self.elements.len() == g.order()
    }

    /// Verifies containment of the identity and closure under product and
    /// inverse in `g`.
    pub fn validate(&self, g: &FiniteGroup, what: &str) -> Result<()> {
        for &i in self.elements.iter().chain(self.generators.iter()) {
            g.check_index(i)?;
        }
        if !self.contains(0) {
            return Err(Error::NotSubgroup(what.into(), "missing identity".into()));
        }
        for w in self.elements.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::NotSubgroup(what.into(), "element set not sorted".into()));
            }
        }
        for &a in &self.elements {
            if !self.contains(g.inv(a)) {
                return Err(Error::NotSubgroup(
                    what.into(),
                    format!("inverse of {a} missing"),
                ));
            }
            for &b in &self.elements {
                if !self.contains(g.mul(a, b)) {
                    return Err(Error::NotSubgroup(
                        what.into(),
                        format!("product {a} * {b} escapes"),
                    ));
                }
            }
        }
        let closed = g.closure_unchecked(&self.generators);
        if closed != self.elements {
            return Err(Error::NotSubgroup(
                what.into(),
                "generator closure differs from element set".into(),
            ));
        }
        Ok(())
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let elements: Vec<usize> = self
            .elements
            .iter()
            .copied()
            .filter(|&x| other.contains(x))
            .collect();
        Subgroup {
            generators: elements.iter().copied().filter(|&x| x != 0).collect(),
            elements,
        }
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }
}

/// Smallest subgroup of `g` containing `seed`; generators are the seed.
pub fn closure(g: &FiniteGroup, seed: &[usize]) -> Result<Subgroup> {
    for &s in seed {
        g.check_index(s)?;
    }
    let elements = g.closure_unchecked(seed);
    Ok(Subgroup {
        elements,
        generators: seed.to_vec(),
    })
}

/// Smallest normal subgroup of `g` containing `seed`.
pub fn normal_closure(g: &FiniteGroup, seed: &[usize]) -> Result<Subgroup> {
    for &s in seed {
        g.check_index(s)?;
    }
    // close the seed under conjugation, then take the subgroup closure,
    // and iterate until stable
    let mut current: Vec<usize> = seed.to_vec();
    loop {
        let mut conjugates: Vec<usize> = Vec::new();
        for &s in &current {
            for t in 0..g.order() {
                conjugates.push(g.mul(g.mul(t, s), g.inv(t)));
            }
        }
        conjugates.sort_unstable();
        conjugates.dedup();
        let closed = g.closure_unchecked(&conjugates);
        if closed == current {
            break;
        }
        current = closed;
    }
    // The seed alone need not generate the normal closure; keep it as the
    // generator list only when it does.
    let generators = if g.closure_unchecked(seed) == current {
        seed.to_vec()
    } else {
        current.iter().copied().filter(|&x| x != 0).collect()
    };
    Ok(Subgroup {
        elements: current,
        generators,
    })
}

pub fn is_normal(g: &FiniteGroup, h: &Subgroup) -> Result<bool> {
    h.validate(g, "H")?;
    Ok(normality_witness(g, h).is_none())
}

/// Returns `Some((conjugator, moved))` when conjugation moves `h` off itself.
pub(crate) fn normality_witness(g: &FiniteGroup, h: &Subgroup) -> Option<(usize, usize)> {
    for t in 0..g.order() {
        for &a in &h.elements {
            let c = g.mul(g.mul(t, a), g.inv(t));
            if !h.contains(c) {
                return Some((t, a));
            }
        }
    }
    None
}

pub fn conjugate(g: &FiniteGroup, by: usize, h: &Subgroup) -> Result<Subgroup> {
    g.check_index(by)?;
    h.validate(g, "H")?;
    let conj = |x: usize| g.mul(g.mul(by, x), g.inv(by));
    let mut elements: Vec<usize> = h.elements.iter().map(|&x| conj(x)).collect();
    elements.sort_unstable();
    Ok(Subgroup {
        elements,
        generators: h.generators.iter().map(|&x| conj(x)).collect(),
    })
}

/// `{ g : g H g^-1 = H }`.
pub fn normalizer(g: &FiniteGroup, h: &Subgroup) -> Result<Subgroup> {
    h.validate(g, "H")?;
    let mut elements = Vec::new();
    for t in 0..g.order() {
        let fixes = h
            .elements
            .iter()
            .all(|&a| h.contains(g.mul(g.mul(t, a), g.inv(t))));
        if fixes {
            elements.push(t);
        }
    }
    Ok(Subgroup {
        generators: elements.iter().copied().filter(|&x| x != 0).collect(),
        elements,
    })
}

/// Left cosets of `h` in `g`, each sorted, ordered by smallest member.
/// The coset of the identity comes first.
pub fn cosets(g: &FiniteGroup, h: &Subgroup) -> Result<Vec<Vec<usize>>> {
    h.validate(g, "H")?;
    let mut seen = vec![false; g.order()];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for a in 0..g.order() {
        if seen[a] {
            continue;
        }
        let mut coset: Vec<usize> = h.elements.iter().map(|&x| g.mul(a, x)).collect();
        coset.sort_unstable();
        for &x in &coset {
            seen[x] = true;
        }
        out.push(coset);
    }
    // scanning elements in index order already yields cosets ordered by
    // their smallest member
    Ok(out)
}

/// Quotient `g / n` on coset representatives, plus the canonical projection.
pub fn quotient(g: &FiniteGroup, n: &Subgroup) -> Result<(FiniteGroup, crate::hom::Homomorphism)> {
    n.validate(g, "N")?;
    if let Some((by, moved)) = normality_witness(g, n) {
        return Err(Error::NotNormal { by, moved });
    }
    let cos = cosets(g, n)?;
    let m = cos.len();
    let mut coset_of = vec![0usize; g.order()];
    for (idx, c) in cos.iter().enumerate() {
        for &x in c {
            coset_of[x] = idx;
        }
    }
    let reps: Vec<usize> = cos.iter().map(|c| c[0]).collect();
    debug_assert_eq!(reps[0], 0);
    let mut table = vec![0u32; m * m];
    for i in 0..m {
        for j in 0..m {
            table[i * m + j] = coset_of[g.mul(reps[i], reps[j])] as u32;
        }
    }
    let labels = g
        .labels
        .as_ref()
        .map(|l| reps.iter().map(|&r| format!("{}N", l[r])).collect());
    let q = FiniteGroup::from_table_trusted(m, table, labels, None);
    let proj = crate::hom::Homomorphism::new_unchecked(coset_of);
    Ok((q, proj))
}

/// Direct product with the two injections and two projections.
pub fn direct_product(
    g1: &FiniteGroup,
    g2: &FiniteGroup,
    limits: &Limits,
) -> Result<(
    FiniteGroup,
    [crate::hom::Homomorphism; 2],
    [crate::hom::Homomorphism; 2],
)> {
    let o1 = g1.order();
    let o2 = g2.order();
    limits.check_order(o1 as u128 * o2 as u128)?;
    let n = o1 * o2;
    let mut table = vec![0u32; n * n];
    for a1 in 0..o1 {
        for b1 in 0..o2 {
            let x = a1 * o2 + b1;
            for a2 in 0..o1 {
                for b2 in 0..o2 {
                    let y = a2 * o2 + b2;
                    table[x * n + y] = (g1.mul(a1, a2) * o2 + g2.mul(b1, b2)) as u32;
                }
            }
        }
    }
    let labels = match (&g1.labels, &g2.labels) {
        (Some(l1), Some(l2)) => {
            let mut l = Vec::with_capacity(n);
            for a in 0..o1 {
                for b in 0..o2 {
                    l.push(format!("({},{})", l1[a], l2[b]));
                }
            }
            Some(l)
        }
        _ => None,
    };
    let p = FiniteGroup::from_table_trusted(n, table, labels, None);
    let inj1 = crate::hom::Homomorphism::new_unchecked((0..o1).map(|a| a * o2).collect());
    let inj2 = crate::hom::Homomorphism::new_unchecked((0..o2).collect());
    let proj1 = crate::hom::Homomorphism::new_unchecked((0..n).map(|x| x / o2).collect());
    let proj2 = crate::hom::Homomorphism::new_unchecked((0..n).map(|x| x % o2).collect());
    Ok((p, [inj1, inj2], [proj1, proj2]))
}

/// Semidirect product `N x| K` with `K` acting through the supplied
/// permutations of `N`.
///
/// The action convention matches the wreath product multiplication used in
/// `crate::construct`: the pair `(k, n)` multiplies as
/// `(k, n)(l, m) = (kl, action[l](n) * m)`, which requires
/// `action[kl] = action[l] . action[k]` (apply `action[k]` first). Both the
/// automorphism property of each permutation and that composition law are
/// checked eagerly.
pub fn semidirect_product(
    n: &FiniteGroup,
    k: &FiniteGroup,
    action: &[Vec<u32>],
    limits: &Limits,
) -> Result<(FiniteGroup, crate::hom::Homomorphism, crate::hom::Homomorphism)> {
    let on = n.order();
    let ok = k.order();
    limits.check_order(on as u128 * ok as u128)?;
    if action.len() != ok {
        return Err(Error::ActionNotHomomorphic { left: 0, right: 0 });
    }
    for (kk, perm) in action.iter().enumerate() {
        if perm.len() != on {
            return Err(Error::NotAutomorphism {
                element: kk,
                reason: format!("permutation has length {}, expected {}", perm.len(), on),
            });
        }
        let mut seen = vec![false; on];
        for &v in perm {
            if v as usize >= on || seen[v as usize] {
                return Err(Error::NotAutomorphism {
                    element: kk,
                    reason: "not a permutation".into(),
                });
            }
            seen[v as usize] = true;
        }
        for a in 0..on {
            for b in 0..on {
                if perm[n.mul(a, b)] as usize
                    != n.mul(perm[a] as usize, perm[b] as usize)
                {
                    return Err(Error::NotAutomorphism {
                        element: kk,
                        reason: format!("fails on product {a} * {b}"),
                    });
                }
            }
        }
    }
    for k1 in 0..ok {
        for k2 in 0..ok {
            let composite = &action[k.mul(k1, k2)];
            for x in 0..on {
                if composite[x] != action[k2][action[k1][x] as usize] {
                    return Err(Error::ActionNotHomomorphic {
                        left: k1,
                        right: k2,
                    });
                }
            }
        }
    }
    if action[0].iter().enumerate().any(|(i, &v)| v as usize != i) {
        return Err(Error::NotAutomorphism {
            element: 0,
            reason: "identity of K must act trivially".into(),
        });
    }
    let total = on * ok;
    let mut table = vec![0u32; total * total];
    let encode = |kk: usize, nn: usize| kk * on + nn;
    for k1 in 0..ok {
        for n1 in 0..on {
            let x = encode(k1, n1);
            for k2 in 0..ok {
                for n2 in 0..on {
                    let y = encode(k2, n2);
                    let moved = action[k2][n1] as usize;
                    table[x * total + y] = encode(k.mul(k1, k2), n.mul(moved, n2)) as u32;
                }
            }
        }
    }
    let p = FiniteGroup::from_table_trusted(total, table, None, None);
    let inj_n = crate::hom::Homomorphism::new_unchecked((0..on).collect());
    let inj_k = crate::hom::Homomorphism::new_unchecked((0..ok).map(|kk| encode(kk, 0)).collect());
    Ok((p, inj_n, inj_k))
}

/// Re-indexes a subgroup as a standalone group; returns the group together
/// with the map from its indices back to parent indices.
pub fn subgroup_as_group(g: &FiniteGroup, s: &Subgroup) -> Result<(FiniteGroup, Vec<usize>)> {
    s.validate(g, "S")?;
    let to_parent = s.elements.clone();
    let m = to_parent.len();
    let pos = |parent: usize| s.elements.binary_search(&parent).unwrap();
    let mut table = vec![0u32; m * m];
    for i in 0..m {
        for j in 0..m {
            table[i * m + j] = pos(g.mul(to_parent[i], to_parent[j])) as u32;
        }
    }
    let labels = g
        .labels
        .as_ref()
        .map(|l| to_parent.iter().map(|&p| l[p].clone()).collect());
    let sub = FiniteGroup::from_table_trusted(m, table, labels, None);
    Ok((sub, to_parent))
}

/// Every subgroup of `g`, found by breadth-first extension of generator
/// sets. Deduplicated; ordered by (order, element set). Desk scale only.
pub fn all_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    use std::collections::BTreeSet;
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out: Vec<Subgroup> = Vec::new();
    let trivial = Subgroup::trivial();
    seen.insert(trivial.elements.clone());
    out.push(trivial);
    let mut frontier: Vec<Subgroup> = out.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            for x in 1..g.order() {
                if s.contains(x) {
                    continue;
                }
                let mut gens = s.generators.clone();
                gens.push(x);
                let elements = g.closure_unchecked(&gens);
                if seen.insert(elements.clone()) {
                    let sub = Subgroup { elements, generators: gens };
                    next.push(sub.clone());
                    out.push(sub);
                }
            }
        }
        frontier = next;
    }
    out.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
    out
}

/// Setwise product `A * B` of two subgroups (not always a subgroup).
pub fn set_product(g: &FiniteGroup, a: &Subgroup, b: &Subgroup) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    let mut seen = vec![false; g.order()];
    for &x in &a.elements {
        for &y in &b.elements {
            let p = g.mul(x, y);
            if !seen[p] {
                seen[p] = true;
                out.push(p);
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::{cyclic, dihedral, klein, symmetric};

    #[test]
    fn closure_examples() {
        let s3 = symmetric(3);
        // empty generating set
        let t = closure(&s3, &[]).unwrap();
        assert_eq!(t.elements, vec![0]);
        // a 3-cycle generates A3
        let three_cycle = (1..6).find(|&a| s3.element_order(a) == 3).unwrap();
        let a3 = closure(&s3, &[three_cycle]).unwrap();
        assert_eq!(a3.order(), 3);
        // everything generates everything
        let all: Vec<usize> = (0..6).collect();
        assert_eq!(closure(&s3, &all).unwrap().order(), 6);
        // invalid index
        assert!(closure(&s3, &[9]).is_err());
    }

    #[test]
    fn normal_closure_examples() {
        let s3 = symmetric(3);
        let transposition = (1..6).find(|&a| s3.element_order(a) == 2).unwrap();
        assert_eq!(normal_closure(&s3, &[transposition]).unwrap().order(), 6);
        assert_eq!(normal_closure(&s3, &[]).unwrap().elements, vec![0]);
        let three_cycle = (1..6).find(|&a| s3.element_order(a) == 3).unwrap();
        assert_eq!(normal_closure(&s3, &[three_cycle]).unwrap().order(), 3);
    }

    #[test]
    fn normalizer_examples() {
        let s3 = symmetric(3);
        let three_cycle = (1..6).find(|&a| s3.element_order(a) == 3).unwrap();
        let a3 = closure(&s3, &[three_cycle]).unwrap();
        assert_eq!(normalizer(&s3, &a3).unwrap().order(), 6);
        let transposition = (1..6).find(|&a| s3.element_order(a) == 2).unwrap();
        let h = closure(&s3, &[transposition]).unwrap();
        let nh = normalizer(&s3, &h).unwrap();
        assert_eq!(nh.elements, h.elements);
        assert_eq!(normalizer(&s3, &Subgroup::whole(&s3)).unwrap().order(), 6);
        // contains H, and H normal inside it
        assert!(h.is_subset_of(&nh));
    }

    #[test]
    fn normality_examples() {
        let s3 = symmetric(3);
        let three_cycle = (1..6).find(|&a| s3.element_order(a) == 3).unwrap();
        let a3 = closure(&s3, &[three_cycle]).unwrap();
        assert!(is_normal(&s3, &a3).unwrap());
        let transposition = (1..6).find(|&a| s3.element_order(a) == 2).unwrap();
        let h = closure(&s3, &[transposition]).unwrap();
        assert!(!is_normal(&s3, &h).unwrap());
        assert_eq!(cosets(&s3, &Subgroup::whole(&s3)).unwrap().len(), 1);
    }

    #[test]
    fn quotient_examples() {
        let s3 = symmetric(3);
        let three_cycle = (1..6).find(|&a| s3.element_order(a) == 3).unwrap();
        let a3 = closure(&s3, &[three_cycle]).unwrap();
        let (q, proj) = quotient(&s3, &a3).unwrap();
        assert_eq!(q.order(), 2);
        // projection is a surjective homomorphism with kernel A3
        proj.validate(&s3, &q).unwrap();
        assert_eq!(proj.kernel(&s3).elements, a3.elements);

        let c4 = cyclic(4);
        let sq = closure(&c4, &[2]).unwrap();
        let (q2, _) = quotient(&c4, &sq).unwrap();
        assert_eq!(q2.order(), 2);

        let (qid, projid) = quotient(&s3, &Subgroup::trivial()).unwrap();
        assert_eq!(qid.order(), 6);
        assert!(projid.is_injective());

        let transposition = (1..6).find(|&a| s3.element_order(a) == 2).unwrap();
        let h = closure(&s3, &[transposition]).unwrap();
        assert!(matches!(quotient(&s3, &h), Err(Error::NotNormal { .. })));
    }

    #[test]
    fn direct_product_examples() {
        let limits = Limits::default();
        let c2 = cyclic(2);
        let (v4, injs, projs) = direct_product(&c2, &c2, &limits).unwrap();
        assert_eq!(v4.order(), 4);
        assert!(v4.order_profile().get(&4).is_none()); // not C4
        for inj in &injs {
            assert!(inj.is_injective());
        }
        for (i, proj) in projs.iter().enumerate() {
            proj.validate(&v4, &c2).unwrap();
            let _ = i;
        }
        let c6 = direct_product(&c2, &cyclic(3), &limits).unwrap().0;
        assert!(c6.is_abelian());
        assert_eq!(c6.order(), 6);

        let (same, _, _) = direct_product(&cyclic(5), &FiniteGroup::trivial(), &limits).unwrap();
        assert!(crate::hom::isomorphic(&same, &cyclic(5)).is_some());
    }

    #[test]
    fn semidirect_examples() {
        let limits = Limits::default();
        let c3 = cyclic(3);
        let c2 = cyclic(2);
        // trivial action gives the direct product
        let id_perm: Vec<u32> = (0..3).collect();
        let (p, _, _) =
            semidirect_product(&c3, &c2, &[id_perm.clone(), id_perm.clone()], &limits).unwrap();
        assert!(p.is_abelian());
        // inversion action gives S3
        let inv_perm: Vec<u32> = vec![0, 2, 1];
        let (s3ish, inj_n, _) =
            semidirect_product(&c3, &c2, &[id_perm.clone(), inv_perm], &limits).unwrap();
        assert!(crate::hom::isomorphic(&s3ish, &symmetric(3)).is_some());
        // the copy of N is normal
        let ncopy = closure(&s3ish, &inj_n.image).unwrap();
        assert!(is_normal(&s3ish, &ncopy).unwrap());
        // a non-automorphism action errors
        let bad: Vec<u32> = vec![1, 0, 2];
        assert!(matches!(
            semidirect_product(&c3, &c2, &[id_perm.clone(), bad], &limits),
            Err(Error::NotAutomorphism { .. })
        ));
        // automorphisms that do not compose homomorphically error
        let inv_perm2: Vec<u32> = vec![0, 2, 1];
        assert!(matches!(
            semidirect_product(&c3, &c2, &[inv_perm2.clone(), inv_perm2], &limits),
            Err(Error::ActionNotHomomorphic { .. })
        ));
    }

    #[test]
    fn loader_rejects_bad_tables() {
        // violates identity
        let t = vec![1u32, 0, 0, 1];
        let err = FiniteGroup::from_table(2, t, None, None).unwrap_err();
        assert!(matches!(err, Error::NotAGroup { .. }));
        // violates associativity but has identity and inverses: no such
        // table exists at order 2, use a doctored order-5 quasigroup
        let t5 = vec![
            0, 1, 2, 3, 4, //
            1, 0, 3, 4, 2, //
            2, 4, 0, 1, 3, //
            3, 2, 4, 0, 1, //
            4, 3, 1, 2, 0,
        ];
        let err = FiniteGroup::from_table(5, t5, None, None).unwrap_err();
        match err {
            Error::NotAGroup { axiom, .. } => assert_eq!(axiom, "associativity"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn conjugate_and_set_product() {
        let d4 = dihedral(4);
        let refl = closure(&d4, &[4]).unwrap();
        let conj = conjugate(&d4, 1, &refl).unwrap();
        assert_eq!(conj.order(), 2);
        let rot = closure(&d4, &[1]).unwrap();
        assert_eq!(set_product(&d4, &rot, &refl).len(), 8);
        let _ = klein();
    }

    #[test]
    fn subgroup_as_group_reindexes() {
        let c4 = cyclic(4);
        let sq = closure(&c4, &[2]).unwrap();
        let (g, back) = subgroup_as_group(&c4, &sq).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(back, vec![0, 2]);
        assert_eq!(g.mul(1, 1), 0);
    }

    #[test]
    fn order_cap_refuses_large_products() {
        let limits = Limits {
            order_cap: 10,
            node_budget: 1000,
        };
        let c4 = cyclic(4);
        assert!(matches!(
            direct_product(&c4, &c4, &limits),
            Err(Error::OrderCapExceeded { .. })
        ));
    }
}
