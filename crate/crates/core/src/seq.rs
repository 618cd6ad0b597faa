//! Finite sequences of naturals, total branch rules, and the canonical
//! pairing used to enumerate countable families fairly.

use alloc::sync::Arc;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

/// A natural number.
pub type Nat = u64;

/// A finite sequence `⟨s₀,…,s_{n−1}⟩` of naturals.
///
/// Ordering is lexicographic with a proper prefix sorting first, so a
/// `BTreeMap<FinSeq, _>` lists a tree in depth-first order.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinSeq(Vec<Nat>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeqError {
    /// `restrict` asked for more entries than the sequence has.
    OutOfRange { len: usize, requested: usize },
    /// Text that is neither `ε` nor dot-separated naturals.
    Parse(String),
}

impl fmt::Display for SeqError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqError::OutOfRange { len, requested } => {
                write!(f, "cannot restrict a sequence of length {len} to {requested} entries")
            }
            SeqError::Parse(s) => write!(f, "malformed sequence `{s}`"),
        }
    }
}

impl FinSeq {
    pub const fn empty() -> Self {
        FinSeq(Vec::new())
    }

    pub fn new(entries: Vec<Nat>) -> Self {
        FinSeq(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Nat] {
        &self.0
    }

    pub fn get(&self, i: usize) -> Option<Nat> {
        self.0.get(i).copied()
    }

    pub fn last(&self) -> Option<Nat> {
        self.0.last().copied()
    }

    pub fn concat(&self, other: &FinSeq) -> FinSeq {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        FinSeq(v)
    }

    /// `s⌢x`.
    pub fn append(&self, x: Nat) -> FinSeq {
        let mut v = self.0.clone();
        v.push(x);
        FinSeq(v)
    }

    pub fn restrict(&self, n: usize) -> Result<FinSeq, SeqError> {
        if n > self.len() {
            return Err(SeqError::OutOfRange { len: self.len(), requested: n });
        }
        Ok(FinSeq(self.0[..n].to_vec()))
    }

    /// `s↾(lh(s)−1)`, or `None` for the empty sequence.
    pub fn parent(&self) -> Option<FinSeq> {
        if self.is_empty() {
            None
        } else {
            Some(FinSeq(self.0[..self.len() - 1].to_vec()))
        }
    }

    /// `self ⊑ other`.
    pub fn is_prefix_of(&self, other: &FinSeq) -> bool {
        other.0.starts_with(&self.0)
    }

    /// `self ⊑ p` for an infinite branch.
    pub fn is_prefix_of_branch(&self, p: &BranchRule) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| p.at(i) == x)
    }

    pub fn comparable(&self, other: &FinSeq) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// Pointwise image `g∘s`.
    pub fn map(&self, g: impl Fn(Nat) -> Nat) -> FinSeq {
        FinSeq(self.0.iter().map(|&x| g(x)).collect())
    }

    /// Position of `self` in the fair enumeration of `ω^{<ω}` (see
    /// [`FinSeq::from_code`]). `None` on overflow.
    pub fn code(&self) -> Option<Nat> {
        let mut code: Nat = 0;
        for &x in self.0.iter().rev() {
            code = diagonal::pair_checked(x, code)?.checked_add(1)?;
        }
        Some(code)
    }

    /// Inverse of [`FinSeq::code`]: `0 ↦ ⟨⟩` and `n+1 ↦ ⟨x⟩⌢from_code(y)` where
    /// `(x, y)` is the unpairing of `n`. Bijective onto `ω^{<ω}`.
    pub fn from_code(mut code: Nat) -> FinSeq {
        let mut v = Vec::new();
        while code > 0 {
            let (x, y) = diagonal::unpair(code - 1);
            v.push(x);
            code = y;
        }
        FinSeq(v)
    }

    /// Bijection `ω → ω^len`.
    pub fn from_code_fixed(mut code: Nat, len: usize) -> FinSeq {
        let mut v = Vec::with_capacity(len);
        for i in 0..len {
            if i + 1 == len {
                v.push(code);
            } else {
                let (x, y) = diagonal::unpair(code);
                v.push(x);
                code = y;
            }
        }
        FinSeq(v)
    }

    /// All sequences of length `≤ depth` with entries `< breadth`, shortest first.
    pub fn window(depth: usize, breadth: Nat) -> Vec<FinSeq> {
        let mut out = alloc::vec![FinSeq::empty()];
        let mut level = alloc::vec![FinSeq::empty()];
        for _ in 0..depth {
            let mut next = Vec::new();
            for s in &level {
                for x in 0..breadth {
                    next.push(s.append(x));
                }
            }
            out.extend(next.iter().cloned());
            level = next;
        }
        out
    }
}

impl From<Vec<Nat>> for FinSeq {
    fn from(v: Vec<Nat>) -> Self {
        FinSeq(v)
    }
}

impl From<&[Nat]> for FinSeq {
    fn from(v: &[Nat]) -> Self {
        FinSeq(v.to_vec())
    }
}

impl<const N: usize> From<[Nat; N]> for FinSeq {
    fn from(v: [Nat; N]) -> Self {
        FinSeq(v.to_vec())
    }
}

/// Renders as dot-separated naturals, `ε` for the empty sequence.
impl fmt::Display for FinSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("ε");
        }
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FinSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "⟩")
    }
}

impl FromStr for FinSeq {
    type Err = SeqError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "ε" || s.is_empty() {
            return Ok(FinSeq::empty());
        }
        s.split('.')
            .map(|part| part.parse::<Nat>().map_err(|_| SeqError::Parse(s.into())))
            .collect::<Result<Vec<_>, _>>()
            .map(FinSeq)
    }
}

/// A total rule `ω → ω`, i.e. a point of the Baire space given lazily.
///
/// There is deliberately no equality: two rules can only be compared on a
/// finite prefix, see [`BranchRule::agrees_to`].
#[derive(Clone)]
pub struct BranchRule {
    rule: Arc<dyn Fn(usize) -> Nat + Send + Sync>,
}

impl BranchRule {
    pub fn from_fn(rule: impl Fn(usize) -> Nat + Send + Sync + 'static) -> Self {
        BranchRule { rule: Arc::new(rule) }
    }

    pub fn constant(v: Nat) -> Self {
        BranchRule::from_fn(move |_| v)
    }

    /// `stem⌢fill⌢fill⌢…`.
    pub fn extending(stem: &FinSeq, fill: Nat) -> Self {
        let stem = stem.clone();
        BranchRule::from_fn(move |i| stem.get(i).unwrap_or(fill))
    }

    /// `stem⌢cycle⌢cycle⌢…`; an empty cycle behaves as the constant-0 tail.
    pub fn eventually_periodic(stem: &FinSeq, cycle: &FinSeq) -> Self {
        let stem = stem.clone();
        let cycle = cycle.clone();
        BranchRule::from_fn(move |i| match stem.get(i) {
            Some(x) => x,
            None if cycle.is_empty() => 0,
            None => cycle.entries()[(i - stem.len()) % cycle.len()],
        })
    }

    pub fn at(&self, i: usize) -> Nat {
        (self.rule)(i)
    }

    /// `p↾n`.
    pub fn restrict(&self, n: usize) -> FinSeq {
        FinSeq((0..n).map(|i| self.at(i)).collect())
    }

    /// `g∘p`.
    pub fn map(&self, g: impl Fn(Nat) -> Nat + Send + Sync + 'static) -> BranchRule {
        let inner = self.clone();
        BranchRule::from_fn(move |i| g(inner.at(i)))
    }

    pub fn agrees_to(&self, other: &BranchRule, depth: usize) -> bool {
        (0..depth).all(|i| self.at(i) == other.at(i))
    }
}

impl fmt::Debug for BranchRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}…", self.restrict(6))
    }
}

/// A total map `g : ω → ω`, used to relabel scheme indices.
#[derive(Clone)]
pub struct NatMap {
    name: &'static str,
    map: Arc<dyn Fn(Nat) -> Nat + Send + Sync>,
}

impl NatMap {
    pub fn new(name: &'static str, map: impl Fn(Nat) -> Nat + Send + Sync + 'static) -> Self {
        NatMap { name, map: Arc::new(map) }
    }

    pub fn identity() -> Self {
        NatMap::new("identity", |n| n)
    }

    /// `n ↦ ⌊n/2⌋`; every value has exactly two preimages.
    pub fn halve() -> Self {
        NatMap::new("halve", |n| n / 2)
    }

    pub fn constant(c: Nat) -> Self {
        NatMap::new("constant", move |_| c)
    }

    /// Exchanges `0` and `1`, fixing everything else.
    pub fn swap_pair() -> Self {
        NatMap::new("swap-pair", |n| match n {
            0 => 1,
            1 => 0,
            n => n,
        })
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn apply(&self, n: Nat) -> Nat {
        (self.map)(n)
    }

    /// `g∘s`.
    pub fn compose(&self, s: &FinSeq) -> FinSeq {
        s.map(|x| self.apply(x))
    }

    /// `g∘p`.
    pub fn compose_branch(&self, p: &BranchRule) -> BranchRule {
        let g = self.clone();
        p.map(move |x| g.apply(x))
    }

    /// Smallest `n < search` with `g(n) = v`.
    pub fn preimage(&self, v: Nat, search: Nat) -> Option<Nat> {
        (0..search).find(|&n| self.apply(n) == v)
    }
}

impl fmt::Debug for NatMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NatMap({})", self.name)
    }
}

/// Cantor pairing `ω×ω ↔ ω`.
pub mod diagonal {
    use super::Nat;

    pub fn pair(x: Nat, y: Nat) -> Nat {
        pair_checked(x, y).expect("pairing overflow")
    }

    pub fn pair_checked(x: Nat, y: Nat) -> Option<Nat> {
        let s = x.checked_add(y)?;
        let tri = if s % 2 == 0 {
            (s / 2).checked_mul(s.checked_add(1)?)?
        } else {
            s.checked_mul((s + 1) / 2)?
        };
        tri.checked_add(y)
    }

    pub fn unpair(n: Nat) -> (Nat, Nat) {
        // largest s with s(s+1)/2 <= n
        let mut s = isqrt(n.saturating_mul(2));
        while triangle(s) > n {
            s -= 1;
        }
        while triangle(s + 1) <= n {
            s += 1;
        }
        let y = n - triangle(s);
        (s - y, y)
    }

    fn triangle(s: Nat) -> Nat {
        (s as u128 * (s as u128 + 1) / 2).min(Nat::MAX as u128) as Nat
    }

    fn isqrt(n: Nat) -> Nat {
        if n < 2 {
            return n;
        }
        let mut x = n;
        let mut y = (x + 1) / 2;
        while y < x {
            x = y;
            y = (x + n / x) / 2;
        }
        x
    }
}
