//! Formal products of the generators `1_{(0,d)}` (written `T(d)`) and
//! `1_{(1,n)}` (written `L(n)`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{HiggsError, Result};
use crate::p1sheaf::KClass;
use crate::partition::Partition;

/// One generator: the characteristic function of all pairs of class
/// `(0,d)` or `(1,n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    Tor(usize),
    Line(i64),
}

impl Generator {
    pub fn class(&self) -> KClass {
        match *self {
            Generator::Tor(d) => KClass::new(0, d as i64),
            Generator::Line(n) => KClass::new(1, n),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Tor(d) => write!(f, "T{d}"),
            Generator::Line(n) => write!(f, "L{n}"),
        }
    }
}

impl FromStr for Generator {
    type Err = HiggsError;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || HiggsError::InvalidInput(format!("bad generator {s:?}; expected T<d> or L<n>"));
        let s = s.trim();
        let body = s.get(1..).ok_or_else(bad)?.trim_start_matches('(').trim_end_matches(')');
        match s.chars().next() {
            Some('T') | Some('t') => {
                let d: usize = body.parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                Ok(Generator::Tor(d))
            }
            Some('L') | Some('l') => Ok(Generator::Line(body.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

/// A product of generators, read left to right as written; the empty word
/// is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "WordRaw", into = "WordRaw")]
pub struct GeneratorWord(Vec<Generator>);

#[derive(Serialize, Deserialize)]
struct WordRaw {
    word: Vec<Generator>,
}

impl TryFrom<WordRaw> for GeneratorWord {
    type Error = HiggsError;
    fn try_from(r: WordRaw) -> Result<Self> {
        GeneratorWord::new(r.word)
    }
}

impl From<GeneratorWord> for WordRaw {
    fn from(w: GeneratorWord) -> Self {
        WordRaw { word: w.0 }
    }
}

impl GeneratorWord {
    pub fn new(gens: Vec<Generator>) -> Result<Self> {
        if gens.contains(&Generator::Tor(0)) {
            return Err(HiggsError::InvalidInput("T(0) is not a generator".into()));
        }
        Ok(Self(gens))
    }

    pub fn unit() -> Self {
        Self(vec![])
    }

    /// `1_λ = T(λ₁)T(λ₂)⋯`.
    pub fn torsion(lambda: &Partition) -> Self {
        Self(lambda.parts().iter().map(|&d| Generator::Tor(d)).collect())
    }

    /// `1_n̄ = L(n₁)L(n₂)⋯` in the given order.
    pub fn lines(ns: &[i64]) -> Self {
        Self(ns.iter().map(|&n| Generator::Line(n)).collect())
    }

    pub fn gens(&self) -> &[Generator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn class(&self) -> KClass {
        self.0.iter().fold(KClass::ZERO, |acc, g| acc + g.class())
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &GeneratorWord) -> GeneratorWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        GeneratorWord(v)
    }

    /// Number of `L` generators.
    pub fn line_count(&self) -> usize {
        self.0.iter().filter(|g| matches!(g, Generator::Line(_))).count()
    }

    /// Ordered form `L(l₁)⋯L(l_r)T(d₁)⋯` with `l₁ ≤ ⋯` and `d₁ ≥ ⋯`.
    pub fn is_ordered(&self) -> bool {
        let first_tor = self.0.iter().position(|g| matches!(g, Generator::Tor(_))).unwrap_or(self.0.len());
        let lines_ok = self.0[..first_tor].windows(2).all(|w| match (w[0], w[1]) {
            (Generator::Line(a), Generator::Line(b)) => a <= b,
            _ => false,
        });
        let tors_ok = self.0[first_tor..].windows(2).all(|w| match (w[0], w[1]) {
            (Generator::Tor(a), Generator::Tor(b)) => a >= b,
            _ => false,
        });
        lines_ok && tors_ok && self.0[first_tor..].iter().all(|g| matches!(g, Generator::Tor(_)))
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|g| g.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for GeneratorWord {
    type Err = HiggsError;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Self::unit());
        }
        GeneratorWord::new(
            s.split(|c: char| c.is_whitespace() || c == '*' || c == '·')
                .filter(|t| !t.is_empty())
                .map(str::parse)
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_forms() {
        let w: GeneratorWord = "L1 L-1 T2".parse().unwrap();
        assert_eq!(w.gens(), &[Generator::Line(1), Generator::Line(-1), Generator::Tor(2)]);
        assert_eq!(w.to_string(), "L1 L-1 T2");
        assert_eq!(w.class(), KClass::new(2, 2));
        let js = serde_json::to_string(&w).unwrap();
        assert_eq!(js, r#"{"word":[{"line":1},{"line":-1},{"tor":2}]}"#);
        assert_eq!(serde_json::from_str::<GeneratorWord>(&js).unwrap(), w);
        assert!(serde_json::from_str::<GeneratorWord>(r#"{"word":[{"tor":0}]}"#).is_err());
        assert!("T0".parse::<GeneratorWord>().is_err());
        assert!("X3".parse::<GeneratorWord>().is_err());
        assert_eq!("1".parse::<GeneratorWord>().unwrap(), GeneratorWord::unit());
        assert_eq!("L(-2)·T(1)".parse::<GeneratorWord>().unwrap().to_string(), "L-2 T1");
    }

    #[test]
    fn ordered_words() {
        assert!("L-1 L0 T2 T1".parse::<GeneratorWord>().unwrap().is_ordered());
        assert!(!"L0 L-1".parse::<GeneratorWord>().unwrap().is_ordered());
        assert!(!"T1 L0".parse::<GeneratorWord>().unwrap().is_ordered());
        assert!(!"T1 T2".parse::<GeneratorWord>().unwrap().is_ordered());
        assert!(GeneratorWord::unit().is_ordered());
    }
}
