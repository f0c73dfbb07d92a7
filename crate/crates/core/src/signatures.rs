//! Elements of the complete-graph poset `K(k)` and the bar-string notation
//! for `K(2)^d`.
//!
//! A factor such as `1212` is an alternating word over `{1, 2}`. Its length
//! minus two is the complexity and its first symbol is the first-moving axis.
//! A [`TruncatedSignature`] lists one factor per level and stops at the first
//! factor of length two; absent levels are the bottom element.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of `K(2)` written as an alternating word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    len: usize,
    lead: u8,
}

impl Factor {
    pub fn new(len: usize, lead: u8) -> Result<Self> {
        if len < 2 {
            return Err(Error::InvalidSignature(format!(
                "factor length {len} is below 2"
            )));
        }
        if lead != 1 && lead != 2 {
            return Err(Error::InvalidSignature(format!(
                "symbol {lead} is not 1 or 2"
            )));
        }
        Ok(Factor { len, lead })
    }

    /// The factor with complexity `mu`, led by axis 1 when `identity` holds.
    pub fn from_params(mu: usize, identity: bool) -> Self {
        Factor {
            len: mu + 2,
            lead: if identity { 1 } else { 2 },
        }
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn lead(&self) -> u8 {
        self.lead
    }

    pub fn last(&self) -> u8 {
        if self.len % 2 == 1 {
            self.lead
        } else {
            3 - self.lead
        }
    }

    pub fn mu(&self) -> usize {
        self.len - 2
    }

    pub fn is_identity(&self) -> bool {
        self.lead == 1
    }

    pub fn swap(&self) -> Self {
        Factor {
            len: self.len,
            lead: 3 - self.lead,
        }
    }

    /// The order of `K(2)`: equal leads compare complexities, differing
    /// leads need a strictly larger complexity on the right.
    pub fn le(&self, other: &Factor) -> bool {
        if self.lead == other.lead {
            self.len <= other.len
        } else {
            self.len < other.len
        }
    }

    pub fn symbols(&self) -> String {
        (0..self.len)
            .map(|i| if i % 2 == 0 { self.lead } else { 3 - self.lead })
            .map(|s| char::from(b'0' + s))
            .collect()
    }

    /// Parses an alternating word such as `1212`.
    pub fn parse(text: &str) -> Result<Self> {
        parse_factor(text, 0)
    }

    fn with_len(&self, len: usize) -> Self {
        Factor {
            len,
            lead: self.lead,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.symbols())
    }
}

fn parse_factor(text: &str, offset: usize) -> Result<Factor> {
    let inner = match (text.starts_with('('), text.ends_with(')')) {
        (true, true) if text.len() >= 2 => &text[1..text.len() - 1],
        (false, false) => text,
        _ => {
            return Err(Error::Parse {
                position: offset,
                message: format!("unbalanced parentheses in {text:?}"),
            })
        }
    };
    let shift = offset + usize::from(text.starts_with('('));
    let bytes = inner.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if b != b'1' && b != b'2' {
            return Err(Error::Parse {
                position: shift + i,
                message: format!("unexpected character {:?}", b as char),
            });
        }
        if i > 0 && bytes[i - 1] == b {
            return Err(Error::Parse {
                position: shift + i,
                message: "factor does not alternate".into(),
            });
        }
    }
    if bytes.len() < 2 {
        return Err(Error::Parse {
            position: shift,
            message: format!("factor {inner:?} is shorter than 2"),
        });
    }
    Ok(Factor {
        len: bytes.len(),
        lead: bytes[0] - b'0',
    })
}

/// An element `(mu, sigma)` of `K(k)`: pairwise complexities together with
/// a permutation recording which axis moves first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BergerElement {
    k: usize,
    /// Complexities for pairs `i < j` in lexicographic order.
    mu: Vec<usize>,
    /// `rank[i]` is the position of axis `i` in first-movement order.
    rank: Vec<usize>,
}

impl BergerElement {
    pub fn new(k: usize, mu: Vec<usize>, rank: Vec<usize>) -> Result<Self> {
        if mu.len() != k * k.saturating_sub(1) / 2 {
            return Err(Error::InvalidSignature(format!(
                "{} complexities given for arity {k}",
                mu.len()
            )));
        }
        let mut seen = vec![false; k];
        if rank.len() != k
            || rank
                .iter()
                .any(|&r| r >= k || std::mem::replace(&mut seen[r], true))
        {
            return Err(Error::InvalidSignature(format!(
                "{rank:?} is not a permutation"
            )));
        }
        Ok(BergerElement { k, mu, rank })
    }

    /// Builds an element from one `K(2)` factor per pair, checking that the
    /// pairwise leads come from a single permutation.
    pub fn from_pairs(k: usize, pair: impl Fn(usize, usize) -> Factor) -> Result<Self> {
        let mut mu = Vec::new();
        let mut before = vec![0usize; k];
        for i in 0..k {
            for j in i + 1..k {
                let f = pair(i, j);
                mu.push(f.mu());
                if f.is_identity() {
                    before[j] += 1;
                } else {
                    before[i] += 1;
                }
            }
        }
        BergerElement::new(k, mu, before)
    }

    pub fn from_factor(f: Factor) -> Self {
        BergerElement {
            k: 2,
            mu: vec![f.mu()],
            rank: if f.is_identity() {
                vec![0, 1]
            } else {
                vec![1, 0]
            },
        }
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn rank(&self) -> &[usize] {
        &self.rank
    }

    fn pair_index(&self, i: usize, j: usize) -> usize {
        i * self.k - i * (i + 1) / 2 + (j - i - 1)
    }

    pub fn mu(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.mu[self.pair_index(i, j)]
    }

    /// The `K(2)` component for the pair `i < j`.
    pub fn pair(&self, i: usize, j: usize) -> Factor {
        assert!(i < j && j < self.k);
        Factor::from_params(self.mu(i, j), self.rank[i] < self.rank[j])
    }

    pub fn to_factor(&self) -> Option<Factor> {
        (self.k == 2).then(|| self.pair(0, 1))
    }

    /// Parses a two-argument factor such as `(121)`, or the printed form
    /// `(mu=[1,0,2], sigma=[1,2,3])`.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        if !trimmed.contains("mu") {
            return Factor::parse(trimmed).map(BergerElement::from_factor);
        }
        let bad = |message: &str| Error::Parse {
            position: 0,
            message: format!("{message} in {trimmed}"),
        };
        let list = |key: &str| -> Result<Vec<usize>> {
            let start = trimmed
                .find(&format!("{key}=["))
                .ok_or_else(|| bad(&format!("missing {key}")))?
                + key.len()
                + 2;
            let end = start
                + trimmed[start..]
                    .find(']')
                    .ok_or_else(|| bad("unclosed list"))?;
            trimmed[start..end]
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.trim().parse::<usize>().map_err(|_| bad("not a number")))
                .collect()
        };
        let mu = list("mu")?;
        let sigma = list("sigma")?;
        if sigma.contains(&0) {
            return Err(bad("sigma is 1-based"));
        }
        BergerElement::new(sigma.len(), mu, sigma.iter().map(|r| r - 1).collect())
    }
}

impl fmt::Display for BergerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mu: Vec<String> = self.mu.iter().map(|m| m.to_string()).collect();
        let sigma: Vec<String> = self.rank.iter().map(|r| (r + 1).to_string()).collect();
        write!(f, "(mu=[{}], sigma=[{}])", mu.join(","), sigma.join(","))
    }
}

/// The order of `K(k)`, pair by pair.
pub fn berger_leq(x: &BergerElement, y: &BergerElement) -> Result<bool> {
    if x.k != y.k {
        return Err(Error::ArityMismatch(x.k, y.k));
    }
    Ok((0..x.k).all(|i| (i + 1..x.k).all(|j| x.pair(i, j).le(&y.pair(i, j)))))
}

/// An element of `K(2)^d` in truncated bar-string form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruncatedSignature {
    d: usize,
    factors: Vec<Factor>,
}

impl TruncatedSignature {
    pub fn new(d: usize, factors: Vec<Factor>) -> Result<Self> {
        if let Some(i) = check_shape(d, &factors) {
            return Err(Error::InvalidSignature(shape_message(d, &factors, i)));
        }
        Ok(TruncatedSignature { d, factors })
    }

    /// Parses `(1212)|(21)`; parentheses are optional.
    pub fn parse(text: &str, d: usize) -> Result<Self> {
        let mut factors = Vec::new();
        let mut offsets = Vec::new();
        let mut offset = 0;
        for part in text.split('|') {
            let trimmed = part.trim();
            let lead_ws = part.len() - part.trim_start().len();
            factors.push(parse_factor(trimmed, offset + lead_ws)?);
            offsets.push(offset + lead_ws);
            offset += part.len() + 1;
        }
        if let Some(i) = check_shape(d, &factors) {
            return Err(Error::Parse {
                position: offsets[i],
                message: shape_message(d, &factors, i),
            });
        }
        Ok(TruncatedSignature { d, factors })
    }

    /// The signature `(121)|...|(121)` with `d` factors.
    pub fn top(d: usize) -> Self {
        TruncatedSignature {
            d,
            factors: vec![Factor { len: 3, lead: 1 }; d],
        }
    }

    /// The signature `(12)` in ambient depth `d`.
    pub fn minimal(d: usize) -> Self {
        TruncatedSignature {
            d,
            factors: vec![Factor { len: 2, lead: 1 }],
        }
    }

    pub fn depth(&self) -> usize {
        self.d
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// The factor at a 1-based level, `None` above the truncation.
    pub fn level(&self, level: usize) -> Option<Factor> {
        level
            .checked_sub(1)
            .and_then(|i| self.factors.get(i).copied())
    }

    pub fn symbol_count(&self) -> usize {
        self.factors.iter().map(|f| f.len).sum()
    }

    /// Re-embeds the signature in another ambient depth.
    pub fn with_depth(&self, d: usize) -> Result<Self> {
        TruncatedSignature::new(d, self.factors.clone())
    }

    /// Componentwise order with absent levels as bottom. Signatures of
    /// different ambient depth are incomparable.
    pub fn le(&self, other: &TruncatedSignature) -> bool {
        self.d == other.d
            && self.factors.len() <= other.factors.len()
            && self
                .factors
                .iter()
                .zip(&other.factors)
                .all(|(a, b)| a.le(b))
    }

    pub fn swap(&self) -> Self {
        TruncatedSignature {
            d: self.d,
            factors: self.factors.iter().map(Factor::swap).collect(),
        }
    }

    /// Every valid signature below this one, sorted.
    pub fn down_set(&self) -> Vec<TruncatedSignature> {
        let mut out = BTreeSet::new();
        let mut prefix = Vec::new();
        self.extend_down(&mut prefix, &mut out);
        out.into_iter().collect()
    }

    fn extend_down(&self, prefix: &mut Vec<Factor>, out: &mut BTreeSet<TruncatedSignature>) {
        let level = prefix.len();
        if level == self.factors.len() {
            return;
        }
        let bound = self.factors[level];
        for f in factors_below(bound) {
            let last_allowed = if level + 1 == self.d {
                true
            } else {
                f.len == 2
            };
            if last_allowed {
                let mut factors = prefix.clone();
                factors.push(f);
                out.insert(TruncatedSignature { d: self.d, factors });
            }
            if f.len >= 3 && level + 1 < self.d {
                prefix.push(f);
                self.extend_down(prefix, out);
                prefix.pop();
            }
        }
    }
}

fn factors_below(bound: Factor) -> impl Iterator<Item = Factor> {
    let same = (2..=bound.len).map(move |l| bound.with_len(l));
    let other = (2..bound.len).map(move |l| bound.swap().with_len(l));
    same.chain(other)
}

fn check_shape(d: usize, factors: &[Factor]) -> Option<usize> {
    if factors.is_empty() {
        return Some(0);
    }
    if factors.len() > d {
        return Some(d);
    }
    let m = factors.len();
    for (i, f) in factors.iter().enumerate() {
        if i + 1 < m && f.len < 3 {
            return Some(i);
        }
    }
    if m < d && factors[m - 1].len != 2 {
        return Some(m - 1);
    }
    None
}

fn shape_message(d: usize, factors: &[Factor], i: usize) -> String {
    let m = factors.len();
    if m == 0 {
        "no factors".into()
    } else if m > d {
        format!("{m} factors exceed depth {d}")
    } else if i + 1 < m {
        format!("intermediate factor {} has length 2", i + 1)
    } else {
        format!("last factor must have length 2 when fewer than {d} factors are given")
    }
}

impl fmt::Display for TruncatedSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SignatureRepr {
    d: usize,
    factors: Vec<String>,
}

impl Serialize for TruncatedSignature {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SignatureRepr {
            d: self.d,
            factors: self.factors.iter().map(Factor::symbols).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedSignature {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SignatureRepr::deserialize(d)?;
        TruncatedSignature::parse(&repr.factors.join("|"), repr.d).map_err(serde::de::Error::custom)
    }
}

/// Parses a signature in ambient depth `d`.
pub fn parse_signature(text: &str, d: usize) -> Result<TruncatedSignature> {
    TruncatedSignature::parse(text, d)
}

pub fn sig_leq(a: &TruncatedSignature, b: &TruncatedSignature) -> Result<bool> {
    if a.d != b.d {
        return Err(Error::DepthMismatch(a.d, b.d));
    }
    Ok(a.le(b))
}

pub fn swap(a: &TruncatedSignature) -> TruncatedSignature {
    a.swap()
}

/// The maximum of the common downset of `a` and `b`, if there is one.
pub fn meet(a: &TruncatedSignature, b: &TruncatedSignature) -> Option<TruncatedSignature> {
    let below_b: BTreeSet<_> = b.down_set().into_iter().collect();
    let common: Vec<_> = a
        .down_set()
        .into_iter()
        .filter(|x| below_b.contains(x))
        .collect();
    common
        .iter()
        .find(|x| common.iter().all(|y| y.le(x)))
        .cloned()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str, d: usize) -> TruncatedSignature {
        TruncatedSignature::parse(text, d).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let sig = s("(1212)|(21)", 2);
        assert_eq!(sig.factors()[0].mu(), 2);
        assert!(sig.factors()[0].is_identity());
        assert_eq!(sig.factors()[1].mu(), 0);
        assert!(!sig.factors()[1].is_identity());
        assert_eq!(sig.to_string(), "(1212)|(21)");
        assert_eq!(s("1212|21", 2), sig);
        assert_eq!(s("(12)", 3).len(), 1);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = |t: &str, d| TruncatedSignature::parse(t, d).unwrap_err();
        assert!(matches!(err("(11)", 1), Error::Parse { position: 2, .. }));
        assert!(matches!(
            err("(12)|(121)", 2),
            Error::Parse { position: 0, .. }
        ));
        assert!(matches!(
            err("(121)|(121)|(12)", 2),
            Error::Parse { position: 12, .. }
        ));
        assert!(matches!(err("(121)", 2), Error::Parse { position: 0, .. }));
        assert!(matches!(err("(121", 1), Error::Parse { .. }));
        assert!(matches!(err("(1)", 1), Error::Parse { .. }));
    }

    #[test]
    fn json_form() {
        let sig = s("(1212)|(21)", 2);
        let json = serde_json::to_string(&sig).unwrap();
        assert_eq!(json, r#"{"d":2,"factors":["1212","21"]}"#);
        assert_eq!(
            serde_json::from_str::<TruncatedSignature>(&json).unwrap(),
            sig
        );
    }

    #[test]
    fn berger_order_on_pairs() {
        let x = |mu, id| BergerElement::from_factor(Factor::from_params(mu, id));
        assert!(berger_leq(&x(0, true), &x(1, true)).unwrap());
        assert!(!berger_leq(&x(1, true), &x(1, false)).unwrap());
        assert!(berger_leq(&x(1, true), &x(1, true)).unwrap());
        let three = BergerElement::new(3, vec![0, 0, 0], vec![0, 1, 2]).unwrap();
        assert!(berger_leq(&x(0, true), &three).is_err());
    }

    #[test]
    fn berger_from_pairs_checks_consistency() {
        let e = BergerElement::from_pairs(3, |_, _| Factor::from_params(1, true)).unwrap();
        assert_eq!(e.rank(), &[0, 1, 2]);
        // A cyclic pattern 1<2, 2<3, 3<1 has no permutation.
        let cyc = BergerElement::from_pairs(3, |i, j| Factor::from_params(0, !(i == 0 && j == 2)));
        assert!(cyc.is_err());
    }

    #[test]
    fn signature_order() {
        assert!(s("(12)", 2).le(&s("(121)|(12)", 2)));
        assert!(!s("(121)|(121)", 2).le(&s("(1212)|(21)", 2)));
        assert!(s("(212)|(21)", 2).le(&s("(1212)|(21)", 2)));
        assert!(sig_leq(&s("(12)", 2), &s("(12)", 3)).is_err());
    }

    #[test]
    fn swapping() {
        assert_eq!(s("(121)|(12)", 2).swap(), s("(212)|(21)", 2));
        assert_eq!(s("(1212)|(21)", 2).swap(), s("(2121)|(12)", 2));
    }

    #[test]
    fn meets() {
        assert_eq!(
            meet(&s("(121)|(121)", 2), &s("(1212)|(21)", 2)),
            Some(s("(121)|(21)", 2))
        );
        let a = s("(1212)|(21)", 2);
        assert_eq!(meet(&a, &a), Some(a));
    }

    #[test]
    fn minimal_factor_has_nothing_below_with_same_lead() {
        let twelve = Factor::parse("12").unwrap();
        assert_eq!(factors_below(twelve).collect::<Vec<_>>(), vec![twelve]);
    }

    #[test]
    fn berger_text_round_trip() {
        let b = BergerElement::new(3, vec![1, 0, 2], vec![1, 0, 2]).unwrap();
        assert_eq!(BergerElement::parse(&b.to_string()).unwrap(), b);
        assert_eq!(
            BergerElement::parse("(212)")
                .unwrap()
                .to_factor()
                .unwrap()
                .to_string(),
            "(212)"
        );
        assert!(BergerElement::parse("(mu=[1], sigma=[1,1])").is_err());
    }
}
