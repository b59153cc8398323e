//! Packing schedules: the non-decreasing radius list `(s_1, ..., s_k)`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A packing schedule. Class `i` (1-based in display, 0-based in code) must
/// be an `s_i`-packing: members pairwise at distance strictly greater than
/// `s_i`.
///
/// Serializes as a plain JSON array; deserialization re-validates, so a
/// decreasing radius list in a certificate file is rejected.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct PackingSchedule {
    radii: Vec<u32>,
}

impl TryFrom<Vec<u32>> for PackingSchedule {
    type Error = Error;
    fn try_from(radii: Vec<u32>) -> Result<Self> {
        PackingSchedule::new(radii)
    }
}

impl From<PackingSchedule> for Vec<u32> {
    fn from(s: PackingSchedule) -> Vec<u32> {
        s.radii
    }
}

impl PackingSchedule {
    /// Validates: non-empty, all radii >= 1, non-decreasing.
    pub fn new(radii: Vec<u32>) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::invalid("schedule must have at least one class"));
        }
        if radii.iter().any(|&s| s == 0) {
            return Err(Error::invalid("schedule radii must be at least 1"));
        }
        if radii.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::invalid(format!(
                "schedule radii must be non-decreasing, got {radii:?}"
            )));
        }
        Ok(PackingSchedule { radii })
    }

    /// The classic schedule `(1, 2, ..., k)` of packing chromatic number.
    pub fn standard(k: usize) -> Result<Self> {
        PackingSchedule::new((1..=k as u32).collect())
    }

    /// Parses `"1,1,2,2"` or the run-length form `"1^2,2^2"` (mixes allowed).
    pub fn parse(text: &str) -> Result<Self> {
        let mut radii = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            if part.is_empty() {
                return Err(Error::invalid("empty entry in schedule"));
            }
            let (value, reps) = match part.split_once('^') {
                Some((v, r)) => {
                    let reps: usize = r
                        .trim()
                        .parse()
                        .map_err(|_| Error::invalid(format!("bad repeat count '{r}'")))?;
                    if reps == 0 {
                        return Err(Error::invalid("repeat count must be at least 1"));
                    }
                    (v.trim(), reps)
                }
                None => (part, 1),
            };
            let s: u32 = value
                .parse()
                .map_err(|_| Error::invalid(format!("bad schedule radius '{value}'")))?;
            radii.extend(std::iter::repeat_n(s, reps));
        }
        PackingSchedule::new(radii)
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        false // new() guarantees at least one class
    }

    /// Radius of 0-based class `i`.
    pub fn radius(&self, i: usize) -> u32 {
        self.radii[i]
    }

    pub fn radii(&self) -> &[u32] {
        &self.radii
    }
}

impl std::fmt::Display for PackingSchedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.radii.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl std::fmt::Debug for PackingSchedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(
            PackingSchedule::parse("1,1,2,2").unwrap().radii(),
            &[1, 1, 2, 2]
        );
        assert_eq!(
            PackingSchedule::parse("1^2,2^2").unwrap().radii(),
            &[1, 1, 2, 2]
        );
        assert_eq!(
            PackingSchedule::parse("1^2, 2, 3").unwrap().radii(),
            &[1, 1, 2, 3]
        );
        assert_eq!(PackingSchedule::parse("5").unwrap().radii(), &[5]);
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(PackingSchedule::parse("").is_err());
        assert!(PackingSchedule::parse("1,,2").is_err());
        assert!(PackingSchedule::parse("2,1").is_err()); // decreasing
        assert!(PackingSchedule::parse("0,1").is_err()); // zero radius
        assert!(PackingSchedule::parse("1^0").is_err());
        assert!(PackingSchedule::parse("1^x").is_err());
        assert!(PackingSchedule::parse("x").is_err());
    }

    #[test]
    fn standard_schedule() {
        let s = PackingSchedule::standard(5).unwrap();
        assert_eq!(s.radii(), &[1, 2, 3, 4, 5]);
        assert_eq!(s.to_string(), "1,2,3,4,5");
        assert!(PackingSchedule::standard(0).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = PackingSchedule::parse("1,1,2,2").unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "[1,1,2,2]");
        let back: PackingSchedule = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
