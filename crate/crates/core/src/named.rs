//! Stock small groups used by the catalog builder and the test corpus.
//! Every constructor puts the identity at index 0.

use crate::group::FiniteGroup;

/// Cyclic group of order `n`, element `i` is the generator to the `i`-th power.
pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = ((a + b) % n) as u32;
        }
    }
    let labels = (0..n)
        .map(|i| if i == 0 { "e".to_string() } else { format!("c{i}") })
        .collect();
    FiniteGroup::from_table_trusted(n, table, Some(labels), Some(if n > 1 { vec![1] } else { vec![] }))
}

/// Klein four-group.
pub fn klein() -> FiniteGroup {
    let table = vec![
        0, 1, 2, 3, //
        1, 0, 3, 2, //
        2, 3, 0, 1, //
        3, 2, 1, 0,
    ];
    FiniteGroup::from_table_trusted(
        4,
        table,
        Some(vec!["e".into(), "a".into(), "b".into(), "ab".into()]),
        Some(vec![1, 2]),
    )
}

/// Dihedral group of order `2n` (`n >= 1`): indices `0..n` are rotations
/// `r^i`, indices `n..2n` are reflections `s r^i`.
pub fn dihedral(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    let total = 2 * n;
    let encode = |t: usize, i: usize| t * n + i;
    let mut table = vec![0u32; total * total];
    for t in 0..2 {
        for i in 0..n {
            for u in 0..2 {
                for j in 0..n {
                    // (s^t r^i)(s^u r^j) = s^(t+u) r^(j +- i)
                    let new_i = if u == 1 {
                        (n + j - i) % n
                    } else {
                        (i + j) % n
                    };
                    table[encode(t, i) * total + encode(u, j)] =
                        encode((t + u) % 2, new_i) as u32;
                }
            }
        }
    }
    let labels = (0..total)
        .map(|x| {
            let (t, i) = (x / n, x % n);
            match (t, i) {
                (0, 0) => "e".to_string(),
                (0, i) => format!("r{i}"),
                (_, 0) => "s".to_string(),
                (_, i) => format!("sr{i}"),
            }
        })
        .collect();
    FiniteGroup::from_table_trusted(total, table, Some(labels), Some(vec![1 % n, n]))
}

/// Quaternion group of order 8: 1, -1, i, -i, j, -j, k, -k.
pub fn quaternion8() -> FiniteGroup {
    // (sign, axis) with axis 0 = scalar 1, 1 = i, 2 = j, 3 = k
    let decode = |x: usize| (x % 2 == 1, x / 2);
    let encode = |neg: bool, axis: usize| axis * 2 + usize::from(neg);
    let mut table = vec![0u32; 64];
    for x in 0..8 {
        for y in 0..8 {
            let (nx, ax) = decode(x);
            let (ny, ay) = decode(y);
            let (mut neg, axis) = match (ax, ay) {
                (0, a) | (a, 0) => (false, a),
                (a, b) if a == b => (true, 0),
                // i*j = k, j*k = i, k*i = j; reversed order flips sign
                (1, 2) => (false, 3),
                (2, 3) => (false, 1),
                (3, 1) => (false, 2),
                (2, 1) => (true, 3),
                (3, 2) => (true, 1),
                (1, 3) => (true, 2),
                _ => unreachable!(),
            };
            neg ^= nx ^ ny;
            table[x * 8 + y] = encode(neg, axis) as u32;
        }
    }
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    FiniteGroup::from_table_trusted(8, table, Some(labels), Some(vec![2, 4]))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    // lexicographic order, so the identity comes first
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        out.push(perm.clone());
        // next_permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    out
}

fn parity(p: &[usize]) -> bool {
    // true for even
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 0
}

fn permutation_group(perms: Vec<Vec<usize>>) -> FiniteGroup {
    let m = perms.len();
    let index: std::collections::HashMap<Vec<usize>, usize> = perms
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let mut table = vec![0u32; m * m];
    for (a, pa) in perms.iter().enumerate() {
        for (b, pb) in perms.iter().enumerate() {
            // composition: apply a, then b
            let comp: Vec<usize> = (0..pa.len()).map(|x| pb[pa[x]]).collect();
            table[a * m + b] = index[&comp] as u32;
        }
    }
    let labels = perms.iter().map(|p| cycle_notation(p)).collect();
    FiniteGroup::from_table_trusted(m, table, Some(labels), None)
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            seen[start] = true;
            continue;
        }
        out.push('(');
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            out.push_str(&(x + 1).to_string());
            x = p[x];
            if !seen[x] {
                out.push(' ');
            }
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

/// Symmetric group on `n` letters (keep `n` small; the table is `n!` square).
pub fn symmetric(n: usize) -> FiniteGroup {
    assert!(n >= 1 && n <= 6);
    permutation_group(permutations(n))
}

/// Alternating group on `n` letters.
pub fn alternating(n: usize) -> FiniteGroup {
    assert!(n >= 1 && n <= 6);
    permutation_group(permutations(n).into_iter().filter(|p| parity(p)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructions_are_groups() {
        for g in [
            cyclic(1),
            cyclic(7),
            klein(),
            dihedral(3),
            dihedral(4),
            quaternion8(),
            symmetric(3),
            symmetric(4),
            alternating(4),
        ] {
            g.check_axioms().unwrap();
        }
    }

    #[test]
    fn expected_structure() {
        assert_eq!(symmetric(4).order(), 24);
        assert_eq!(alternating(4).order(), 12);
        assert!(crate::hom::isomorphic(&dihedral(3), &symmetric(3)).is_some());
        assert_eq!(quaternion8().order_profile()[&4], 6);
        assert_eq!(dihedral(4).order_profile()[&2], 5);
        assert!(cyclic(6).is_abelian());
        assert!(!alternating(4).is_abelian());
    }
}
