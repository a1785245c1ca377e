//! Sign vectors identified with their negatives.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A sign vector in `{±1}^t` modulo global negation, stored with its first
/// entry forced to `+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignClass(Vec<i8>);

impl SignClass {
    /// Canonicalizes an arbitrary sign vector. Zero entries are rejected.
    pub fn new(signs: &[i8]) -> Result<Self> {
        if signs.is_empty() || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidSignClass(format!("{signs:?}")));
        }
        let flip = signs[0];
        Ok(Self(signs.iter().map(|&s| s * flip).collect()))
    }

    /// Sign class of a real vector without zero entries.
    pub fn of(values: &[f64]) -> Result<Self> {
        let signs: Vec<i8> = values
            .iter()
            .map(|&x| {
                if x > 0.0 {
                    1
                } else if x < 0.0 {
                    -1
                } else {
                    0
                }
            })
            .collect();
        Self::new(&signs)
    }

    /// All `2^(t-1)` canonical classes, ordered by their bit pattern.
    pub fn all(t: usize) -> Vec<Self> {
        assert!(
            (1..32).contains(&t),
            "sign classes enumerated for 1 <= t < 32"
        );
        (0..(1u32 << (t - 1)))
            .map(|bits| {
                let mut v = vec![1i8; t];
                for (k, s) in v.iter_mut().skip(1).enumerate() {
                    if bits >> (t - 2 - k) & 1 == 1 {
                        *s = -1;
                    }
                }
                Self(v)
            })
            .collect()
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when the vector has these signs up to a global flip.
    pub fn matches(&self, values: &[f64]) -> bool {
        Self::of(values).is_ok_and(|s| &s == self)
    }

    /// Restriction to a subset of coordinates, re-canonicalized.
    pub fn project(&self, indices: &[usize]) -> Self {
        let sub: Vec<i8> = indices.iter().map(|&i| self.0[i]).collect();
        Self::new(&sub).expect("restriction of a valid sign vector")
    }

    /// Applies the signs to a vector of magnitudes.
    pub fn apply(&self, magnitudes: &[f64]) -> Vec<f64> {
        self.0
            .iter()
            .zip(magnitudes)
            .map(|(&s, &m)| f64::from(s) * m)
            .collect()
    }
}

impl fmt::Display for SignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            f.write_str(if s > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl FromStr for SignClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let signs = s
            .trim()
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(Error::InvalidSignClass(s.to_string())),
            })
            .collect::<Result<Vec<i8>>>()?;
        Self::new(&signs).map_err(|_| Error::InvalidSignClass(s.to_string()))
    }
}

impl Serialize for SignClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negation_is_normalized() {
        let a: SignClass = "-+++-".parse().unwrap();
        let b: SignClass = "+---+".parse().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "+---+");
    }

    #[test]
    fn enumerates_all_classes() {
        let all = SignClass::all(5);
        assert_eq!(all.len(), 16);
        assert_eq!(all[0].to_string(), "+++++");
        assert_eq!(all[15].to_string(), "+----");
        let mut uniq = all.clone();
        uniq.dedup();
        assert_eq!(uniq.len(), 16);
    }

    #[test]
    fn rejects_garbage() {
        assert!("+0-".parse::<SignClass>().is_err());
        assert!("".parse::<SignClass>().is_err());
        assert!(SignClass::of(&[1.0, 0.0]).is_err());
    }

    #[test]
    fn projection_and_matching() {
        let s: SignClass = "++-++".parse().unwrap();
        assert_eq!(s.project(&[0, 2, 4]).to_string(), "+-+");
        assert!(s.matches(&[-1.0, -2.0, 3.0, -1.0, -0.5]));
        assert!(!s.matches(&[1.0, 2.0, 3.0, 1.0, 0.5]));
    }
}
