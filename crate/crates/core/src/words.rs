//! Group words, word evaluation, verbal subgroups, and finitely based
//! varieties (including product varieties).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{self, FiniteGroup, Subgroup};
use crate::limits::Limits;

/// A word in variables `x1, x2, ...`: a sequence of (variable, exponent)
/// syllables. Exponents are nonzero; adjacent syllables may repeat a
/// variable (no forced normal form).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Word {
    pub syllables: Vec<(u32, i32)>,
}

impl Word {
    pub fn arity(&self) -> usize {
        self.syllables.iter().map(|&(v, _)| v as usize).max().unwrap_or(0)
    }

    /// The commutator `[x1, x2]` in its fixed expansion
    /// `x1^-1 x2^-1 x1 x2`.
    pub fn commutator_law() -> Word {
        Word {
            syllables: vec![(1, -1), (2, -1), (1, 1), (2, 1)],
        }
    }

    pub fn power_law(e: u32) -> Word {
        Word {
            syllables: vec![(1, e as i32)],
        }
    }

    /// Evaluates the word at `tuple` (indexed from variable 1).
    pub fn eval(&self, g: &FiniteGroup, tuple: &[usize]) -> Result<usize> {
        if tuple.len() < self.arity() {
            return Err(Error::WordSyntax {
                position: 0,
                message: format!(
                    "tuple of length {} for word of arity {}",
                    tuple.len(),
                    self.arity()
                ),
            });
        }
        for &t in tuple {
            g.check_index(t)?;
        }
        let mut acc = 0usize;
        for &(v, e) in &self.syllables {
            acc = g.mul(acc, g.pow(tuple[(v - 1) as usize], e as i64));
        }
        Ok(acc)
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, &(v, e)) in self.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if e == 1 {
                write!(f, "x{v}")?;
            } else {
                write!(f, "x{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Parses the word grammar:
///
/// ```text
/// word := term+
/// term := atom ('^' int)?
/// atom := 'x' digits | '(' word ')' | '[' word ',' word ']'
/// ```
///
/// `[a, b]` expands to `a^-1 b^-1 a b`.
pub fn parse_word(text: &str) -> Result<Word> {
    let mut p = Parser {
        chars: text.char_indices().collect(),
        pos: 0,
    };
    let syllables = p.word()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("trailing input"));
    }
    if syllables.is_empty() {
        return Err(Error::WordSyntax {
            position: 0,
            message: "empty word".into(),
        });
    }
    Ok(Word { syllables })
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Parser {
    fn err(&self, message: &str) -> Error {
        let position = self
            .chars
            .get(self.pos)
            .map(|&(b, _)| b)
            .unwrap_or_else(|| self.chars.last().map(|&(b, c)| b + c.len_utf8()).unwrap_or(0));
        Error::WordSyntax {
            position,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace() || c == '*') {
            self.pos += 1;
        }
    }

    fn word(&mut self) -> Result<Vec<(u32, i32)>> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some('x') | Some('(') | Some('[') => out.extend(self.term()?),
                _ => break,
            }
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<Vec<(u32, i32)>> {
        let atom = self.atom()?;
        self.skip_ws();
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.int()?;
            if e == 0 {
                return Err(self.err("exponent must be nonzero"));
            }
            Ok(word_pow(&atom, e))
        } else {
            Ok(atom)
        }
    }

    fn atom(&mut self) -> Result<Vec<(u32, i32)>> {
        self.skip_ws();
        match self.peek() {
            Some('x') => {
                self.pos += 1;
                let v = self.digits()?;
                if v == 0 {
                    return Err(self.err("variable index must be >= 1"));
                }
                Ok(vec![(v, 1)])
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.word()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                if inner.is_empty() {
                    return Err(self.err("empty parenthesized word"));
                }
                Ok(inner)
            }
            Some('[') => {
                self.pos += 1;
                let a = self.word()?;
                self.skip_ws();
                if self.peek() != Some(',') {
                    return Err(self.err("expected ',' in commutator"));
                }
                self.pos += 1;
                let b = self.word()?;
                self.skip_ws();
                if self.peek() != Some(']') {
                    return Err(self.err("expected ']'"));
                }
                self.pos += 1;
                if a.is_empty() || b.is_empty() {
                    return Err(self.err("empty commutator argument"));
                }
                // [a, b] = a^-1 b^-1 a b
                let mut out = word_pow(&a, -1);
                out.extend(word_pow(&b, -1));
                out.extend(a);
                out.extend(b);
                Ok(out)
            }
            _ => Err(self.err("expected 'x', '(' or '['")),
        }
    }

    fn digits(&mut self) -> Result<u32> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected digits"));
        }
        let s: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        s.parse().map_err(|_| self.err("number too large"))
    }

    fn int(&mut self) -> Result<i32> {
        self.skip_ws();
        let negative = if self.peek() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let d = self.digits()? as i64;
        let v = if negative { -d } else { d };
        i32::try_from(v).map_err(|_| self.err("exponent out of range"))
    }
}

fn word_pow(syllables: &[(u32, i32)], e: i32) -> Vec<(u32, i32)> {
    if syllables.len() == 1 {
        let (v, base) = syllables[0];
        return vec![(v, base.saturating_mul(e))];
    }
    let once: Vec<(u32, i32)> = if e < 0 {
        syllables.iter().rev().map(|&(v, x)| (v, -x)).collect()
    } else {
        syllables.to_vec()
    };
    let mut out = Vec::new();
    for _ in 0..e.unsigned_abs() {
        out.extend(once.iter().copied());
    }
    out
}

/// A variety of groups given either by a finite law basis or as a product
/// of factor presentations (leftmost factor is the normal-subgroup
/// variety: `Product[N, Q]` means extensions of an N-group by a Q-group).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum VarietyPresentation {
    Basis {
        name: String,
        laws: Vec<Word>,
        /// Declared, never inferred: deciding whether `x^n` follows from
        /// an arbitrary basis is out of scope.
        declared_exponent: Option<u64>,
        /// Declared containments (names of varieties this one is a
        /// subvariety of), likewise never inferred.
        contained_in: Vec<String>,
    },
    Product {
        name: String,
        factors: Vec<VarietyPresentation>,
    },
}

impl VarietyPresentation {
    pub fn name(&self) -> &str {
        match self {
            VarietyPresentation::Basis { name, .. } => name,
            VarietyPresentation::Product { name, .. } => name,
        }
    }

    pub fn abelian() -> Self {
        VarietyPresentation::Basis {
            name: "abelian".into(),
            laws: vec![Word::commutator_law()],
            declared_exponent: None,
            contained_in: vec![],
        }
    }

    pub fn abelian_exponent(e: u32) -> Self {
        VarietyPresentation::Basis {
            name: format!("abelian-exp-{e}"),
            laws: vec![Word::commutator_law(), Word::power_law(e)],
            declared_exponent: Some(e as u64),
            contained_in: vec![],
        }
    }

    /// The metabelian variety as the product of two abelian factors.
    pub fn metabelian() -> Self {
        VarietyPresentation::Product {
            name: "metabelian".into(),
            factors: vec![Self::abelian(), Self::abelian()],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            VarietyPresentation::Basis { name, laws, .. } => {
                if laws.is_empty() {
                    return Err(Error::InvalidVariety(name.clone(), "empty law basis".into()));
                }
                for w in laws {
                    if w.syllables.iter().any(|&(v, e)| v == 0 || e == 0) {
                        return Err(Error::InvalidVariety(
                            name.clone(),
                            format!("malformed law '{w}'"),
                        ));
                    }
                }
                Ok(())
            }
            VarietyPresentation::Product { name, factors } => {
                if factors.len() < 2 {
                    return Err(Error::InvalidVariety(
                        name.clone(),
                        "product needs at least 2 factors".into(),
                    ));
                }
                factors.iter().try_for_each(|f| f.validate())
            }
        }
    }

    /// Whether a basis is flagged abelian: the literal commutator law
    /// `[x1, x2]` appears in the basis.
    pub fn is_abelian_basis(&self) -> bool {
        match self {
            VarietyPresentation::Basis { laws, .. } => {
                laws.iter().any(|w| *w == Word::commutator_law())
            }
            VarietyPresentation::Product { .. } => false,
        }
    }

    pub fn declared_exponent(&self) -> Option<u64> {
        match self {
            VarietyPresentation::Basis {
                declared_exponent, ..
            } => *declared_exponent,
            VarietyPresentation::Product { .. } => None,
        }
    }

    pub fn declares_contained_in(&self, other: &VarietyPresentation) -> bool {
        match self {
            VarietyPresentation::Basis { contained_in, .. } => {
                contained_in.iter().any(|n| n == other.name())
            }
            VarietyPresentation::Product { .. } => false,
        }
    }

    /// For a product presentation, splits off the leftmost (normal
    /// subgroup) factor; the remainder is the quotient variety.
    pub fn product_split(&self) -> Result<(VarietyPresentation, VarietyPresentation)> {
        match self {
            VarietyPresentation::Product { name, factors } => {
                self.validate()?;
                let inner = factors[0].clone();
                let outer = if factors.len() == 2 {
                    factors[1].clone()
                } else {
                    VarietyPresentation::Product {
                        name: format!("{name}-tail"),
                        factors: factors[1..].to_vec(),
                    }
                };
                Ok((inner, outer))
            }
            VarietyPresentation::Basis { name, .. } => Err(Error::InvalidVariety(
                name.clone(),
                "expected a product presentation".into(),
            )),
        }
    }
}

/// Verbal subgroup of `g` for the variety `v`.
///
/// Basis: closure of all law values over all tuples, with early exit when
/// the value set already covers the group. Product: computed recursively as
/// the left factor's verbal subgroup of the right factor's verbal subgroup
/// (innermost evaluation starts at the rightmost factor).
pub fn verbal_subgroup(g: &FiniteGroup, v: &VarietyPresentation, limits: &Limits) -> Result<Subgroup> {
    v.validate()?;
    match v {
        VarietyPresentation::Basis { laws, .. } => verbal_of_basis(g, laws, limits),
        VarietyPresentation::Product { factors, .. } => {
            let mut current = Subgroup::whole(g);
            for factor in factors.iter().rev() {
                current = verbal_in_subgroup(g, &current, factor, limits)?;
            }
            Ok(current)
        }
    }
}

fn verbal_in_subgroup(
    g: &FiniteGroup,
    s: &Subgroup,
    v: &VarietyPresentation,
    limits: &Limits,
) -> Result<Subgroup> {
    if s.is_whole(g) {
        return verbal_subgroup(g, v, limits);
    }
    let (sub, to_parent) = group::subgroup_as_group(g, s)?;
    let inner = verbal_subgroup(&sub, v, limits)?;
    let elements: Vec<usize> = inner.elements.iter().map(|&i| to_parent[i]).collect();
    let generators: Vec<usize> = inner.generators.iter().map(|&i| to_parent[i]).collect();
    // elements of a subgroup are mapped monotonically, so the set stays sorted
    Ok(Subgroup {
        elements,
        generators,
    })
}

fn verbal_of_basis(g: &FiniteGroup, laws: &[Word], limits: &Limits) -> Result<Subgroup> {
    let n = g.order();
    let mut in_values = vec![false; n];
    in_values[0] = true;
    let mut values = vec![0usize];
    let mut evals: u64 = 0;
    'laws: for law in laws {
        let arity = law.arity();
        let tuple_count = (n as u128).checked_pow(arity as u32).unwrap_or(u128::MAX);
        if evals as u128 + tuple_count > limits.node_budget as u128 {
            return Err(Error::BudgetExhausted {
                nodes: evals,
                context: format!(
                    "verbal subgroup tuple enumeration: law '{law}' needs {tuple_count} tuples"
                ),
            });
        }
        let mut tuple = vec![0usize; arity.max(1)];
        loop {
            let value = law.eval(g, &tuple)?;
            evals += 1;
            if !in_values[value] {
                in_values[value] = true;
                values.push(value);
                if values.len() == n {
                    break 'laws;
                }
            }
            // odometer over tuples
            let mut k = 0;
            loop {
                if k == arity {
                    break;
                }
                tuple[k] += 1;
                if tuple[k] < n {
                    break;
                }
                tuple[k] = 0;
                k += 1;
            }
            if k == arity {
                break;
            }
        }
    }
    values.sort_unstable();
    let elements = g.closure_unchecked(&values);
    Ok(Subgroup {
        generators: values.into_iter().filter(|&x| x != 0).collect(),
        elements,
    })
}

/// `G` belongs to `V` iff the verbal subgroup is trivial.
pub fn is_member(g: &FiniteGroup, v: &VarietyPresentation, limits: &Limits) -> Result<bool> {
    Ok(verbal_subgroup(g, v, limits)?.is_trivial())
}

/// Least common multiple of the element orders.
pub fn group_exponent(g: &FiniteGroup) -> u64 {
    let mut acc: u64 = 1;
    for a in 0..g.order() {
        let o = g.element_order(a) as u64;
        acc = lcm(acc, o);
    }
    acc
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Two varieties are disjoint iff their declared exponents are relatively
/// prime. Errors when either presentation lacks a declared exponent.
pub fn disjoint_by_exponent(v1: &VarietyPresentation, v2: &VarietyPresentation) -> Result<bool> {
    let e1 = v1
        .declared_exponent()
        .ok_or_else(|| Error::UndeclaredExponent(v1.name().into()))?;
    let e2 = v2
        .declared_exponent()
        .ok_or_else(|| Error::UndeclaredExponent(v2.name().into()))?;
    Ok(gcd(e1, e2) == 1)
}
