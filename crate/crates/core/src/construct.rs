//! Wreath products over group actions, induced maps, transversals, the
//! Kaloujnine–Krasner embedding, and the two witness constructions used by
//! the dominion certifier.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{
    cosets, direct_product, is_normal, normalizer, quotient, semidirect_product,
    subgroup_as_group, FiniteGroup, Subgroup,
};
use crate::hom::Homomorphism;
use crate::homsearch::{agreeing_pairs, equalizer};
use crate::limits::Limits;
use crate::words::{is_member, VarietyPresentation};

/// A right action of a group on `{0, …, domain_size-1}`: `perms[g]` sends
/// `ω` to `ω·g`, so `perms[g·h] = perms[h] ∘ perms[g]` (apply `g` first).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupAction {
    pub domain_size: usize,
    pub perms: Vec<Vec<u32>>,
}

impl GroupAction {
    /// Right regular action of `k` on itself: `ω·g = ωg`.
    pub fn regular(k: &FiniteGroup) -> GroupAction {
        let n = k.order();
        GroupAction {
            domain_size: n,
            perms: (0..n)
                .map(|g| (0..n).map(|w| k.mul(w, g) as u32).collect())
                .collect(),
        }
    }

    /// The left-multiplication action on left cosets of `h`, written as a
    /// right action: `ω·g = g⁻¹ω`. The identity coset `H` has index 0 and
    /// its stabilizer is exactly `H`.
    pub fn on_left_cosets(g: &FiniteGroup, h: &Subgroup) -> Result<GroupAction> {
        let cs = cosets(g, h)?;
        let mut coset_of = vec![0usize; g.order()];
        for (i, c) in cs.iter().enumerate() {
            for &x in c {
                coset_of[x] = i;
            }
        }
        let perms = (0..g.order())
            .map(|x| {
                let xi = g.inv(x);
                cs.iter()
                    .map(|c| coset_of[g.mul(xi, c[0])] as u32)
                    .collect()
            })
            .collect();
        Ok(GroupAction {
            domain_size: cs.len(),
            perms,
        })
    }

    pub fn apply(&self, omega: usize, g: usize) -> usize {
        self.perms[g][omega] as usize
    }

    /// Checks the invariants: one permutation per group element, identity
    /// acts trivially, and the right-action composition law.
    pub fn validate(&self, k: &FiniteGroup) -> Result<()> {
        if self.perms.len() != k.order() {
            return Err(Error::ActionNotHomomorphic { left: 0, right: 0 });
        }
        for (g, perm) in self.perms.iter().enumerate() {
            let mut seen = vec![false; self.domain_size];
            if perm.len() != self.domain_size {
                return Err(Error::NotAutomorphism {
                    element: g,
                    reason: "permutation length mismatch".into(),
                });
            }
            for &v in perm {
                if v as usize >= self.domain_size || seen[v as usize] {
                    return Err(Error::NotAutomorphism {
                        element: g,
                        reason: "not a permutation of the domain".into(),
                    });
                }
                seen[v as usize] = true;
            }
        }
        if (0..self.domain_size).any(|w| self.apply(w, 0) != w) {
            return Err(Error::NotAutomorphism {
                element: 0,
                reason: "identity must act trivially".into(),
            });
        }
        for a in 0..k.order() {
            for b in 0..k.order() {
                for w in 0..self.domain_size {
                    if self.apply(w, k.mul(a, b)) != self.apply(self.apply(w, a), b) {
                        return Err(Error::ActionNotHomomorphic { left: a, right: b });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Direct power `N^k` in mixed-radix encoding: coordinate `i` has weight
/// `|N|^i`.
pub fn direct_power(n: &FiniteGroup, k: usize, limits: &Limits) -> Result<FiniteGroup> {
    let on = n.order() as u128;
    limits.check_order(on.checked_pow(k as u32).unwrap_or(u128::MAX))?;
    let o = n.order();
    let total = o.pow(k as u32);
    let mut table = vec![0u32; total * total];
    for x in 0..total {
        for y in 0..total {
            let mut z = 0usize;
            for i in (0..k).rev() {
                let w = o.pow(i as u32);
                z = z * o + n.mul((x / w) % o, (y / w) % o);
            }
            table[x * total + y] = z as u32;
        }
    }
    Ok(FiniteGroup::from_table_trusted(total, table, None, None))
}

/// The wreath product `N ≀_Ω K`, flattened to a Cayley table.
///
/// Elements are pairs `(k, φ)` with `φ: Ω → N`, multiplied by
/// `(k,φ)(ℓ,ψ) = (kℓ, φ^ℓψ)` where `φ^ℓ(y) = φ(y·ℓ⁻¹)`. Flat index is
/// `k · |N|^|Ω| + code(φ)` with `φ(ω)` at mixed-radix weight `|N|^ω`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WreathGroup {
    pub base: FiniteGroup,
    pub top: FiniteGroup,
    pub action: GroupAction,
    /// `N^|Ω|`, the base subgroup as a standalone group.
    pub base_power: FiniteGroup,
    pub flat: FiniteGroup,
    /// `N^|Ω|` into the flat group; its image is normal.
    pub base_embedding: Homomorphism,
    /// `K` into the flat group as `(k, identity)`.
    pub top_embedding: Homomorphism,
}

impl WreathGroup {
    pub fn encode(&self, k: usize, phi: &[usize]) -> usize {
        debug_assert_eq!(phi.len(), self.action.domain_size);
        let o = self.base.order();
        let mut code = 0usize;
        for &v in phi.iter().rev() {
            code = code * o + v;
        }
        k * self.base_power.order() + code
    }

    pub fn decode(&self, x: usize) -> (usize, Vec<usize>) {
        let o = self.base.order();
        let bp = self.base_power.order();
        let mut code = x % bp;
        let phi = (0..self.action.domain_size)
            .map(|_| {
                let v = code % o;
                code /= o;
                v
            })
            .collect();
        (x / bp, phi)
    }

    /// The canonical projection onto the top group.
    pub fn top_projection(&self) -> Homomorphism {
        let bp = self.base_power.order();
        Homomorphism::new_unchecked((0..self.flat.order()).map(|x| x / bp).collect())
    }
}

pub fn omega_wreath(
    n: &FiniteGroup,
    k: &FiniteGroup,
    action: GroupAction,
    limits: &Limits,
) -> Result<WreathGroup> {
    action.validate(k)?;
    let flat_order = (n.order() as u128)
        .checked_pow(action.domain_size as u32)
        .and_then(|b| b.checked_mul(k.order() as u128))
        .unwrap_or(u128::MAX);
    limits.check_order(flat_order)?;
    let base_power = direct_power(n, action.domain_size, limits)?;
    let o = n.order();
    let deg = action.domain_size;
    // K acts on φ-codes: coordinate y of φ^k is coordinate y·k⁻¹ of φ
    let base_action: Vec<Vec<u32>> = (0..k.order())
        .map(|kk| {
            let kinv = k.inv(kk);
            (0..base_power.order())
                .map(|phi| {
                    let mut out = 0usize;
                    for y in (0..deg).rev() {
                        let src = action.apply(y, kinv);
                        out = out * o + (phi / o.pow(src as u32)) % o;
                    }
                    out as u32
                })
                .collect()
        })
        .collect();
    let (flat, base_embedding, top_embedding) =
        semidirect_product(&base_power, k, &base_action, limits)?;
    Ok(WreathGroup {
        base: n.clone(),
        top: k.clone(),
        action,
        base_power,
        flat,
        base_embedding,
        top_embedding,
    })
}

/// Regular wreath product `N wr K` (Ω = K with right translation).
pub fn regular_wreath(n: &FiniteGroup, k: &FiniteGroup, limits: &Limits) -> Result<WreathGroup> {
    omega_wreath(n, k, GroupAction::regular(k), limits)
}

/// The map `f*: N ≀_Ω K → M ≀_Ω K` induced by `f: N → M`, sending
/// `(k, φ)` to `(k, f∘φ)`. Returns the codomain wreath together with the
/// map; `f*` is injective whenever `f` is.
pub fn induced_map(
    f: &Homomorphism,
    w: &WreathGroup,
    m: &FiniteGroup,
    limits: &Limits,
) -> Result<(WreathGroup, Homomorphism)> {
    f.validate(&w.base, m)?;
    let target = omega_wreath(m, &w.top, w.action.clone(), limits)?;
    let image = (0..w.flat.order())
        .map(|x| {
            let (k, phi) = w.decode(x);
            let mapped: Vec<usize> = phi.iter().map(|&v| f.apply(v)).collect();
            target.encode(k, &mapped)
        })
        .collect();
    let star = Homomorphism::new(&w.flat, &target.flat, image)?;
    Ok((target, star))
}

/// An exact sequence `1 → N → G → B → 1` presented concretely: the kernel
/// both as a subgroup of `G` and as a standalone group.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtensionPresentation {
    pub total: FiniteGroup,
    pub kernel: Subgroup,
    pub kernel_group: FiniteGroup,
    /// kernel-group index → parent index (the injection, as a lookup table)
    pub to_parent: Vec<usize>,
    pub quotient: FiniteGroup,
    pub injection: Homomorphism,
    pub projection: Homomorphism,
}

impl ExtensionPresentation {
    pub fn from_normal(g: &FiniteGroup, n: &Subgroup) -> Result<Self> {
        if !is_normal(g, n)? {
            let w = crate::group::normality_witness(g, n).unwrap();
            return Err(Error::NotNormal {
                by: w.0,
                moved: w.1,
            });
        }
        let (kernel_group, to_parent) = subgroup_as_group(g, n)?;
        let (quotient, projection) = quotient(g, n)?;
        let injection = Homomorphism::new_unchecked(to_parent.clone());
        Ok(ExtensionPresentation {
            total: g.clone(),
            kernel: n.clone(),
            kernel_group,
            to_parent,
            quotient,
            injection,
            projection,
        })
    }

    /// Exactness: injection injective, projection surjective, and
    /// image(injection) = kernel(projection).
    pub fn validate(&self) -> Result<()> {
        self.injection.validate(&self.kernel_group, &self.total)?;
        self.projection.validate(&self.total, &self.quotient)?;
        let exact = self.injection.is_injective()
            && self.projection.is_surjective(self.quotient.order())
            && self.injection.image_subgroup().elements
                == self.projection.kernel(&self.total).elements;
        if exact {
            Ok(())
        } else {
            Err(Error::HypothesisViolated(
                "extension is not exact".into(),
            ))
        }
    }

    /// Parent index → kernel-group index; the element must lie in the kernel.
    pub fn kernel_index(&self, parent: usize) -> Result<usize> {
        self.to_parent
            .binary_search(&parent)
            .map_err(|_| Error::HypothesisViolated(format!("element {parent} is not in the kernel")))
    }
}

/// A set-theoretic section of the projection `G → B`: one lift per coset,
/// with the identity coset lifted to `e`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Transversal {
    pub quotient: FiniteGroup,
    pub lift: Vec<usize>,
    pub projection: Homomorphism,
}

impl Transversal {
    pub fn validate(&self) -> Result<()> {
        if self.lift.len() != self.quotient.order() || self.lift[0] != 0 {
            return Err(Error::HypothesisViolated(
                "transversal must lift the identity coset to e".into(),
            ));
        }
        for (b, &g) in self.lift.iter().enumerate() {
            if self.projection.apply(g) != b {
                return Err(Error::HypothesisViolated(format!(
                    "lift of coset {b} projects to {}",
                    self.projection.apply(g)
                )));
            }
        }
        Ok(())
    }
}

/// Lifts each coset to its smallest element in index order.
pub fn default_transversal(ext: &ExtensionPresentation) -> Transversal {
    let mut lift = vec![usize::MAX; ext.quotient.order()];
    for g in 0..ext.total.order() {
        let b = ext.projection.apply(g);
        if lift[b] == usize::MAX {
            lift[b] = g;
        }
    }
    Transversal {
        quotient: ext.quotient.clone(),
        lift,
        projection: ext.projection.clone(),
    }
}

/// The Kaloujnine–Krasner embedding `γ: G → N ≀ B` for the extension
/// `1 → N → G → B → 1`: `γ(g) = (π(g), φ_g)` with
/// `φ_g(y) = α⁻¹(τ(yπ(g)⁻¹) · g · τ(y)⁻¹)`.
///
/// Returns the regular wreath `N ≀ B` and the (verified injective)
/// embedding; composing with the wreath's top projection recovers `π`.
pub fn kk_embedding(
    ext: &ExtensionPresentation,
    tau: &Transversal,
    limits: &Limits,
) -> Result<(WreathGroup, Homomorphism)> {
    ext.validate()?;
    tau.validate()?;
    let b = &ext.quotient;
    let g = &ext.total;
    let w = regular_wreath(&ext.kernel_group, b, limits)?;
    let mut image = Vec::with_capacity(g.order());
    for x in 0..g.order() {
        let kk = ext.projection.apply(x);
        let kk_inv = b.inv(kk);
        let mut phi = Vec::with_capacity(b.order());
        for y in 0..b.order() {
            let shifted = b.mul(y, kk_inv);
            let p = g.mul(g.mul(tau.lift[shifted], x), g.inv(tau.lift[y]));
            phi.push(ext.kernel_index(p)?);
        }
        image.push(w.encode(kk, &phi));
    }
    let gamma = Homomorphism::new(g, &w.flat, image)?;
    if !gamma.is_injective() {
        return Err(Error::HypothesisViolated(
            "embedding unexpectedly not injective".into(),
        ));
    }
    let top = w.top_projection();
    if gamma.compose(&top).image != ext.projection.image {
        return Err(Error::HypothesisViolated(
            "embedding does not cover the projection".into(),
        ));
    }
    Ok((w, gamma))
}

/// Transversal of `N` in `G` built per `H`-orbit on the cosets, satisfying:
/// (1) the coset `N` lifts to `e`; (2) every lift normalizes `D`; (3) for
/// every `h ∈ H` and coset `yN` there is `h' ∈ H` with
/// `τ(yh⁻¹N) = τ(yN)h'⁻¹`.
///
/// Requires `H ⊆ N_G(D)` and `N_G(D)·N = G`; the failing coset is named
/// when the latter does not hold. The returned transversal is re-checked by
/// the independent `check_transversal_properties`.
pub fn orbit_transversal(
    g: &FiniteGroup,
    n: &Subgroup,
    h: &Subgroup,
    d: &Subgroup,
) -> Result<Transversal> {
    if !is_normal(g, n)? {
        let w = crate::group::normality_witness(g, n).unwrap();
        return Err(Error::NotNormal {
            by: w.0,
            moved: w.1,
        });
    }
    h.validate(g, "H")?;
    let nd = normalizer(g, d)?;
    if !h.is_subset_of(&nd) {
        return Err(Error::HypothesisViolated(
            "H does not normalize D".into(),
        ));
    }
    let (quotient_group, projection) = quotient(g, n)?;
    let ncosets = quotient_group.order();
    let mut lift = vec![usize::MAX; ncosets];
    // orbits of the H-action b ↦ (coset of) t·h⁻¹; base representative per
    // orbit chosen in N_G(D), with e forced for the coset N
    for start in 0..ncosets {
        if lift[start] != usize::MAX {
            continue;
        }
        let base = if start == 0 {
            0
        } else {
            // smallest element of the coset lying in N_G(D)
            match (0..g.order())
                .find(|&x| projection.apply(x) == start && nd.contains(x))
            {
                Some(x) => x,
                None => {
                    return Err(Error::HypothesisViolated(format!(
                        "coset {start} of N does not intersect N_G(D); N_G(D)N != G"
                    )))
                }
            }
        };
        lift[start] = base;
        let mut queue = vec![start];
        while let Some(b) = queue.pop() {
            for &hh in &h.elements {
                let moved = g.mul(lift[b], g.inv(hh));
                let b2 = projection.apply(moved);
                if lift[b2] == usize::MAX {
                    lift[b2] = moved;
                    queue.push(b2);
                }
            }
        }
    }
    let tau = Transversal {
        quotient: quotient_group,
        lift,
        projection,
    };
    check_transversal_properties(g, h, d, &tau)?;
    Ok(tau)
}

/// Independent checker for the three orbit-transversal properties; written
/// directly from their statements, not from the builder's bookkeeping.
pub fn check_transversal_properties(
    g: &FiniteGroup,
    h: &Subgroup,
    d: &Subgroup,
    tau: &Transversal,
) -> Result<()> {
    tau.validate()?;
    let nd = normalizer(g, d)?;
    for (b, &t) in tau.lift.iter().enumerate() {
        if !nd.contains(t) {
            return Err(Error::HypothesisViolated(format!(
                "lift {t} of coset {b} does not normalize D"
            )));
        }
    }
    for b in 0..tau.quotient.order() {
        for &hh in &h.elements {
            let b2 = tau.projection.apply(g.mul(tau.lift[b], g.inv(hh)));
            let ok = h
                .elements
                .iter()
                .any(|&hp| tau.lift[b2] == g.mul(tau.lift[b], g.inv(hp)));
            if !ok {
                return Err(Error::HypothesisViolated(format!(
                    "property (3) fails at coset {b}, h = {hh}"
                )));
            }
        }
    }
    Ok(())
}

/// The Theorem 3.1 witness: `K = M ≀_{G/H} G` via the coset action, the
/// top embedding `f`, and `g = conjugation by n ∘ f` where `n` is the base
/// element supported exactly on the coset `H` with the first nonidentity
/// value of `M`. Then `{x ∈ G : f(x) = g(x)} = H` exactly.
pub fn mckay_witness(
    g: &FiniteGroup,
    h: &Subgroup,
    m: &FiniteGroup,
    v: &VarietyPresentation,
    limits: &Limits,
) -> Result<(WreathGroup, Homomorphism, Homomorphism)> {
    let (inner, outer) = v.product_split()?;
    if !is_member(g, &outer, limits)? {
        return Err(Error::MembershipFailed {
            member: "G".into(),
            variety: outer.name().into(),
        });
    }
    if !is_member(m, &inner, limits)? {
        return Err(Error::MembershipFailed {
            member: "M".into(),
            variety: inner.name().into(),
        });
    }
    if m.order() < 2 {
        return Err(Error::HypothesisViolated("M must be nontrivial".into()));
    }
    let action = GroupAction::on_left_cosets(g, h)?;
    let w = omega_wreath(m, g, action, limits)?;
    let f = w.top_embedding.clone();
    // n = (e, φ) with φ supported on the identity coset (index 0), value =
    // first nonidentity element of M — any nonidentity value works
    let mut phi = vec![0usize; w.action.domain_size];
    phi[0] = 1;
    let n_flat = w.encode(0, &phi);
    let n_inv = w.flat.inv(n_flat);
    let image = (0..g.order())
        .map(|x| w.flat.mul(w.flat.mul(n_inv, f.apply(x)), n_flat))
        .collect();
    let conj = Homomorphism::new(g, &w.flat, image)?;
    // machine-check the defining property before handing the witness out
    let eq: Vec<usize> = (0..g.order())
        .filter(|&x| f.apply(x) == conj.apply(x))
        .collect();
    if eq != h.elements {
        return Err(Error::HypothesisViolated(
            "witness equalizer does not match H".into(),
        ));
    }
    Ok((w, f, conj))
}

/// A pair of maps out of `N` agreeing exactly on `D`: `left|_D = right|_D`
/// and `left(x) ≠ right(x)` for every `x ∉ D`. The target is a member of
/// the inner variety (possibly a direct product of catalog members).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeparatingFamily {
    pub target: FiniteGroup,
    pub left: Homomorphism,
    pub right: Homomorphism,
    pub provenance: String,
}

impl SeparatingFamily {
    /// Direct check of the defining property.
    pub fn separates(&self, n: &FiniteGroup, d: &Subgroup) -> bool {
        (0..n.order()).all(|x| (self.left.apply(x) == self.right.apply(x)) == d.contains(x))
    }
}

/// Finds a separating pair for `D ≤ N` in the inner variety.
///
/// Abelian inner variety with `D` normal: `N/D` with the projection and
/// the trivial map. Otherwise a greedy search over catalog targets,
/// combining agreeing pairs diagonally into a direct product until the
/// joint agreement set shrinks to exactly `D`.
pub fn separating_pair(
    n: &FiniteGroup,
    d: &Subgroup,
    inner: &VarietyPresentation,
    catalog: &crate::catalog::Catalog,
    limits: &Limits,
) -> Result<SeparatingFamily> {
    d.validate(n, "D")?;
    if d.is_whole(n) {
        return Ok(SeparatingFamily {
            target: crate::named::cyclic(1),
            left: Homomorphism::trivial(n.order()),
            right: Homomorphism::trivial(n.order()),
            provenance: "trivial (D = N)".into(),
        });
    }
    if inner.is_abelian_basis() && is_normal(n, d)? && is_member(n, inner, limits)? {
        let (q, proj) = quotient(n, d)?;
        let fam = SeparatingFamily {
            target: q,
            left: proj,
            right: Homomorphism::trivial(n.order()),
            provenance: "quotient N/D, projection vs trivial".into(),
        };
        debug_assert!(fam.separates(n, d));
        return Ok(fam);
    }
    // catalog route: shrink the joint agreement set greedily
    let mut agreement = Subgroup::whole(n);
    let mut chosen: Vec<(String, FiniteGroup, Homomorphism, Homomorphism)> = Vec::new();
    'targets: for entry in &catalog.entries {
        if !is_member(&entry.group, inner, limits)? {
            continue;
        }
        for pair in agreeing_pairs(n, &entry.group, d, limits)? {
            let eq = equalizer(n, &pair);
            let shrunk = agreement.intersect(&eq);
            if shrunk.elements != agreement.elements {
                agreement = shrunk;
                chosen.push((entry.provenance.clone(), entry.group.clone(), pair.f, pair.g));
            }
            if agreement.elements == d.elements {
                break 'targets;
            }
        }
    }
    if agreement.elements != d.elements {
        let unseparated = agreement
            .elements
            .iter()
            .copied()
            .filter(|&x| !d.contains(x))
            .collect();
        return Err(Error::SeparatingPairNotFound(unseparated));
    }
    // diagonal into the direct product of the chosen targets
    let mut target = crate::named::cyclic(1);
    let mut left = vec![0usize; n.order()];
    let mut right = vec![0usize; n.order()];
    let mut names = Vec::new();
    for (name, tgt, f, g) in &chosen {
        let (p, _, _) = direct_product(&target, tgt, limits)?;
        for x in 0..n.order() {
            left[x] = left[x] * tgt.order() + f.apply(x);
            right[x] = right[x] * tgt.order() + g.apply(x);
        }
        target = p;
        names.push(name.clone());
    }
    let fam = SeparatingFamily {
        left: Homomorphism::new(n, &target, left)?,
        right: Homomorphism::new(n, &target, right)?,
        target,
        provenance: format!("diagonal into direct({})", names.join(",")),
    };
    debug_assert!(fam.separates(n, d));
    Ok(fam)
}

/// Everything the Theorem 3.4 pipeline produced, for audit. When
/// `certified` is true the dominion is exactly `hd`; otherwise the report
/// degrades to the sandwich bounds and `notes` says why.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessReport {
    /// The outer-variety verbal subgroup `N = 𝒬(G)`.
    pub n: Subgroup,
    /// Inner dominion of `H∩N` in `N` (in `G` indices).
    pub d: Subgroup,
    /// `HD = ⟨H, D⟩`, the certified dominion when `certified`.
    pub hd: Subgroup,
    pub certified: bool,
    pub notes: Vec<String>,
    pub transversal_lift: Option<Vec<usize>>,
    pub gamma: Option<Homomorphism>,
    pub left_composite: Option<Homomorphism>,
    pub right_composite: Option<Homomorphism>,
    pub separating_provenance: Option<String>,
    pub wreath_order: Option<usize>,
}

/// The Theorem 3.4 pipeline for `dom_G^𝒩𝒬(H)`: inner dominion `D`, orbit
/// transversal, Kaloujnine–Krasner embedding `γ`, separating pair for `D`
/// in `N`, induced maps into `M ≀ (G/N)`, and the two machine checks —
/// the composites agree on `H`, and their equalizer meets `N` in exactly
/// `D`. Certifies `dom = HD` when everything passes and `D` is exact;
/// hypothesis failures degrade the report instead of erroring.
pub fn bigone_witness(
    g: &FiniteGroup,
    h: &Subgroup,
    v: &VarietyPresentation,
    catalog: &crate::catalog::Catalog,
    limits: &Limits,
) -> Result<WitnessReport> {
    use crate::bounds::{inner_dominion, Provenance};
    h.validate(g, "H")?;
    let (inner, outer) = v.product_split()?;
    let n = crate::words::verbal_subgroup(g, &outer, limits)?;
    let (n_group, to_parent) = subgroup_as_group(g, &n)?;
    let k_local_elements: Vec<usize> = to_parent
        .iter()
        .enumerate()
        .filter(|&(_, &p)| h.contains(p))
        .map(|(i, _)| i)
        .collect();
    let k_local = Subgroup {
        generators: k_local_elements.iter().copied().filter(|&x| x != 0).collect(),
        elements: k_local_elements,
    };
    let (d_local, d_prov) = inner_dominion(&n_group, &k_local, &inner, catalog, limits)?;
    let d = Subgroup {
        elements: d_local.elements.iter().map(|&i| to_parent[i]).collect(),
        generators: d_local
            .elements
            .iter()
            .map(|&i| to_parent[i])
            .filter(|&x| x != 0)
            .collect(),
    };
    let hd_seed: Vec<usize> = h.elements.iter().chain(&d.elements).copied().collect();
    let hd = crate::group::closure(g, &hd_seed)?;
    let mut report = WitnessReport {
        n: n.clone(),
        d: d.clone(),
        hd,
        certified: false,
        notes: Vec::new(),
        transversal_lift: None,
        gamma: None,
        left_composite: None,
        right_composite: None,
        separating_provenance: None,
        wreath_order: None,
    };
    if d_prov == Provenance::Approximate {
        report
            .notes
            .push("inner dominion D is only approximate; cannot certify".into());
    }
    // hypothesis: N_G(D) N = G
    let nd = normalizer(g, &d)?;
    if crate::group::set_product(g, &nd, &n).len() != g.order() {
        report.notes.push("hypothesis N_G(D)N = G fails; sandwich-only".into());
        return Ok(report);
    }
    let tau = match orbit_transversal(g, &n, h, &d) {
        Ok(t) => t,
        Err(e) => {
            report.notes.push(format!("orbit transversal failed: {e}"));
            return Ok(report);
        }
    };
    report.transversal_lift = Some(tau.lift.clone());
    let ext = ExtensionPresentation::from_normal(g, &n)?;
    let (w, gamma) = kk_embedding(&ext, &tau, limits)?;
    report.wreath_order = Some(w.flat.order());
    let fam = match separating_pair(&ext.kernel_group, &d_local, &inner, catalog, limits) {
        Ok(f) => f,
        Err(Error::SeparatingPairNotFound(unseparated)) => {
            report.notes.push(format!(
                "no separating pair for D in N; unseparated elements {unseparated:?}"
            ));
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    report.separating_provenance = Some(fam.provenance.clone());
    let (_, l_star) = induced_map(&fam.left, &w, &fam.target, limits)?;
    let (_, r_star) = induced_map(&fam.right, &w, &fam.target, limits)?;
    let lcomp = gamma.compose(&l_star);
    let rcomp = gamma.compose(&r_star);
    // (a) the composites agree on H
    let agree_on_h = lcomp.agrees_with_on(&rcomp, &h.elements);
    // (b) their equalizer meets N in exactly D
    let eq_in_n: Vec<usize> = n
        .elements
        .iter()
        .copied()
        .filter(|&x| lcomp.apply(x) == rcomp.apply(x))
        .collect();
    let meets_exactly = eq_in_n == d.elements;
    if !agree_on_h {
        report.notes.push("composites do not agree on H".into());
    }
    if !meets_exactly {
        report
            .notes
            .push(format!("equalizer meets N in {eq_in_n:?}, expected D"));
    }
    report.gamma = Some(gamma);
    report.left_composite = Some(lcomp);
    report.right_composite = Some(rcomp);
    report.certified = agree_on_h && meets_exactly && d_prov == Provenance::Exact;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;
    use crate::group::closure;
    use crate::hom::isomorphic;
    use crate::named::{alternating, cyclic, dihedral, symmetric};

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn wreath_examples() {
        let w = regular_wreath(&cyclic(2), &cyclic(2), &limits()).unwrap();
        assert_eq!(w.flat.order(), 8);
        assert!(isomorphic(&w.flat, &dihedral(4)).is_some());

        let w = regular_wreath(&cyclic(2), &cyclic(3), &limits()).unwrap();
        assert_eq!(w.flat.order(), 24);

        let w = regular_wreath(&cyclic(1), &symmetric(3), &limits()).unwrap();
        assert!(isomorphic(&w.flat, &symmetric(3)).is_some());

        // base image is normal
        let w = regular_wreath(&cyclic(2), &cyclic(2), &limits()).unwrap();
        let base = w.base_embedding.image_subgroup();
        assert!(is_normal(&w.flat, &base).unwrap());
    }

    #[test]
    fn induced_map_examples() {
        let lim = limits();
        let w = regular_wreath(&cyclic(2), &cyclic(2), &lim).unwrap();
        // identity induces the identity
        let (_, star) = induced_map(&Homomorphism::identity(2), &w, &cyclic(2), &lim).unwrap();
        assert_eq!(star, Homomorphism::identity(8));
        // trivial map collapses the base to the top copy
        let (_, star) = induced_map(&Homomorphism::trivial(2), &w, &cyclic(2), &lim).unwrap();
        assert_eq!(star.image_subgroup().order(), 2);
        // C2 into C4 induces an injective map with image of order 8
        let f = Homomorphism::new(&cyclic(2), &cyclic(4), vec![0, 2]).unwrap();
        let (_, star) = induced_map(&f, &w, &cyclic(4), &lim).unwrap();
        assert!(star.is_injective());
        assert_eq!(star.image_subgroup().order(), 8);
    }

    #[test]
    fn induced_map_functorial() {
        let lim = limits();
        let w = regular_wreath(&cyclic(2), &cyclic(2), &lim).unwrap();
        let f = Homomorphism::new(&cyclic(2), &cyclic(4), vec![0, 2]).unwrap();
        let g = Homomorphism::new(&cyclic(4), &cyclic(2), vec![0, 1, 0, 1]).unwrap();
        let (wf, f_star) = induced_map(&f, &w, &cyclic(4), &lim).unwrap();
        let (_, g_star) = induced_map(&g, &wf, &cyclic(2), &lim).unwrap();
        let (_, gf_star) = induced_map(&f.compose(&g), &w, &cyclic(2), &lim).unwrap();
        assert_eq!(f_star.compose(&g_star), gf_star);
    }

    #[test]
    fn kk_embedding_examples() {
        let lim = limits();
        // C4 as an extension of C2 by C2
        let c4 = cyclic(4);
        let n = closure(&c4, &[2]).unwrap();
        let ext = ExtensionPresentation::from_normal(&c4, &n).unwrap();
        let tau = default_transversal(&ext);
        let (w, gamma) = kk_embedding(&ext, &tau, &lim).unwrap();
        assert_eq!(w.flat.order(), 8);
        assert!(isomorphic(&w.flat, &dihedral(4)).is_some());
        assert_eq!(gamma.image_subgroup().order(), 4);

        // S3 as an extension of A3 by C2
        let s3 = symmetric(3);
        let a3: Vec<usize> = (0..6).filter(|&x| s3.element_order(x) % 2 == 1).collect();
        let a3 = closure(&s3, &a3).unwrap();
        let ext = ExtensionPresentation::from_normal(&s3, &a3).unwrap();
        let tau = default_transversal(&ext);
        let (w, gamma) = kk_embedding(&ext, &tau, &lim).unwrap();
        assert_eq!(w.flat.order(), 18);
        assert!(gamma.is_injective());
        // projection compatibility
        assert_eq!(gamma.compose(&w.top_projection()), ext.projection);

        // trivial quotient: gamma lands in the single base copy
        let ext = ExtensionPresentation::from_normal(&s3, &Subgroup::whole(&s3)).unwrap();
        let tau = default_transversal(&ext);
        let (w, gamma) = kk_embedding(&ext, &tau, &lim).unwrap();
        assert_eq!(w.flat.order(), 6);
        assert!(gamma.is_injective());
    }

    #[test]
    fn orbit_transversal_examples() {
        let s3 = symmetric(3);
        let a3 = closure(&s3, &[3]).unwrap();
        let h = closure(&s3, &[2]).unwrap();
        let tau = orbit_transversal(&s3, &a3, &h, &Subgroup::trivial()).unwrap();
        assert_eq!(tau.lift, vec![0, 2]);
        check_transversal_properties(&s3, &h, &Subgroup::trivial(), &tau).unwrap();

        // N = G: single lift e
        let tau = orbit_transversal(&s3, &Subgroup::whole(&s3), &h, &Subgroup::trivial()).unwrap();
        assert_eq!(tau.lift, vec![0]);

        // A4 with N = V4, D = H = a C2 inside V4: N_G(D)N = V4 != A4
        let a4 = alternating(4);
        let v4: Vec<usize> = (0..12).filter(|&x| a4.element_order(x) <= 2).collect();
        let v4 = closure(&a4, &v4).unwrap();
        assert_eq!(v4.order(), 4);
        let d = closure(&a4, &[v4.elements[1]]).unwrap();
        match orbit_transversal(&a4, &v4, &d, &d) {
            Err(Error::HypothesisViolated(msg)) => assert!(msg.contains("N_G(D)N")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mckay_examples() {
        let lim = limits();
        let metab = VarietyPresentation::metabelian();
        // (C4, <c^2>, C2): K of order 16, equalizer meets G in H
        let c4 = cyclic(4);
        let h = closure(&c4, &[2]).unwrap();
        let (w, f, g) = mckay_witness(&c4, &h, &cyclic(2), &metab, &lim).unwrap();
        assert_eq!(w.flat.order(), 16);
        let eq: Vec<usize> = (0..4).filter(|&x| f.apply(x) == g.apply(x)).collect();
        assert_eq!(eq, h.elements);
        assert!(is_member(&w.flat, &metab, &lim).unwrap());

        // (C2, {e}, C2): K = flat(C2 wr C2)
        let c2 = cyclic(2);
        let (w, f, g) = mckay_witness(&c2, &Subgroup::trivial(), &cyclic(2), &metab, &lim).unwrap();
        assert_eq!(w.flat.order(), 8);
        let eq: Vec<usize> = (0..2).filter(|&x| f.apply(x) == g.apply(x)).collect();
        assert_eq!(eq, vec![0]);

        // H = G: single coset, f = g
        let (_, f, g) = mckay_witness(&c4, &Subgroup::whole(&c4), &cyclic(2), &metab, &lim).unwrap();
        assert_eq!(f, g);

        // G outside the outer variety is rejected
        let s4 = symmetric(4);
        assert!(matches!(
            mckay_witness(&s4, &Subgroup::trivial(), &cyclic(2), &metab, &lim),
            Err(Error::MembershipFailed { .. })
        ));
    }

    #[test]
    fn separating_pair_examples() {
        let lim = limits();
        let abelian = VarietyPresentation::abelian();
        let empty = Catalog::default();
        // (C4, <c^2>, A): quotient route
        let c4 = cyclic(4);
        let d = closure(&c4, &[2]).unwrap();
        let fam = separating_pair(&c4, &d, &abelian, &empty, &lim).unwrap();
        assert_eq!(fam.target.order(), 2);
        assert!(fam.separates(&c4, &d));

        // D = N: trivial target
        let fam = separating_pair(&c4, &Subgroup::whole(&c4), &abelian, &empty, &lim).unwrap();
        assert_eq!(fam.target.order(), 1);
        assert!(fam.separates(&c4, &Subgroup::whole(&c4)));

        // non-normal D in a nonabelian N with abelian inner variety:
        // quotient route impossible, catalog cannot separate -> NotFound
        let s3 = symmetric(3);
        let d = closure(&s3, &[2]).unwrap();
        let cat = Catalog {
            entries: vec![crate::catalog::CatalogEntry {
                group: cyclic(2),
                provenance: "cyclic(2)".into(),
                memberships: Default::default(),
            }],
        };
        match separating_pair(&s3, &d, &abelian, &cat, &lim) {
            Err(Error::SeparatingPairNotFound(unseparated)) => {
                assert!(!unseparated.is_empty())
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn separating_pair_diagonal_route() {
        // N = C2 x C2 with D trivial and a non-abelian-basis inner variety
        // (exponent-2 abelian written as a plain basis without the literal
        // commutator law being taken by the flag? use abelian with
        // non-normal detection bypassed by giving a catalog) — here we
        // simply force the catalog route with an inner variety whose
        // abelian flag is off.
        let lim = limits();
        let v = VarietyPresentation::Basis {
            name: "exp2".into(),
            laws: vec![crate::words::parse_word("x1^2").unwrap()],
            declared_exponent: Some(2),
            contained_in: vec![],
        };
        let k4 = crate::named::klein();
        let cat = Catalog {
            entries: vec![crate::catalog::CatalogEntry {
                group: cyclic(2),
                provenance: "cyclic(2)".into(),
                memberships: Default::default(),
            }],
        };
        let fam = separating_pair(&k4, &Subgroup::trivial(), &v, &cat, &lim).unwrap();
        assert!(fam.separates(&k4, &Subgroup::trivial()));
        assert!(fam.target.order() >= 4);
    }

    #[test]
    fn bigone_s3_transposition() {
        // full pipeline on (S3, <(12)>, metabelian): D = {e}, dom = H
        let lim = limits();
        let s3 = symmetric(3);
        let h = closure(&s3, &[2]).unwrap();
        let cat = crate::catalog::build_catalog(
            &VarietyPresentation::metabelian(),
            6,
            &crate::catalog::ConstructorSet::default(),
            &lim,
        )
        .unwrap();
        let report =
            bigone_witness(&s3, &h, &VarietyPresentation::metabelian(), &cat, &lim).unwrap();
        assert!(report.certified, "notes: {:?}", report.notes);
        assert_eq!(report.d.elements, vec![0]);
        assert_eq!(report.hd.elements, h.elements);
        assert_eq!(report.wreath_order, Some(18));
    }

    #[test]
    fn bigone_abelian_degenerate() {
        // abelian G: N = {e}, D = {e}, dom = H
        let lim = limits();
        let c4 = cyclic(4);
        let h = closure(&c4, &[2]).unwrap();
        let report = bigone_witness(
            &c4,
            &h,
            &VarietyPresentation::metabelian(),
            &Catalog::default(),
            &lim,
        )
        .unwrap();
        assert!(report.certified, "notes: {:?}", report.notes);
        assert_eq!(report.hd.elements, h.elements);
    }

    #[test]
    fn coset_action_stabilizer() {
        let s3 = symmetric(3);
        let h = closure(&s3, &[2]).unwrap();
        let act = GroupAction::on_left_cosets(&s3, &h).unwrap();
        act.validate(&s3).unwrap();
        assert_eq!(act.domain_size, 3);
        let stab: Vec<usize> = (0..6).filter(|&x| act.apply(0, x) == 0).collect();
        assert_eq!(stab, h.elements);
    }
}
