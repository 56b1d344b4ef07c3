use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// Contiguous run of exact sequence values starting at `base_index`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceWindow {
    base_index: i64,
    values: Vec<Rational>,
    has_zero: bool,
}

impl SequenceWindow {
    pub fn new(base_index: i64, values: Vec<Rational>) -> Self {
        let has_zero = values.iter().any(Zero::is_zero);
        SequenceWindow {
            base_index,
            values,
            has_zero,
        }
    }

    pub fn from_integers(base_index: i64, values: &[i64]) -> Self {
        Self::new(base_index, values.iter().map(|&v| super::rat(v)).collect())
    }

    pub fn base_index(&self) -> i64 {
        self.base_index
    }

    /// One past the last stored index.
    pub fn end_index(&self) -> i64 {
        self.base_index + self.values.len() as i64
    }

    pub fn last_index(&self) -> i64 {
        self.end_index() - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn has_zero(&self) -> bool {
        self.has_zero
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn contains(&self, n: i64) -> bool {
        n >= self.base_index && n < self.end_index()
    }

    pub fn get(&self, n: i64) -> Option<&Rational> {
        if self.contains(n) {
            self.values.get((n - self.base_index) as usize)
        } else {
            None
        }
    }

    /// Like [`get`](Self::get) but with a typed error.
    pub fn at(&self, n: i64) -> Result<&Rational> {
        self.get(n).ok_or(Error::IndexOutOfWindow(n))
    }

    pub fn indices(&self) -> std::ops::Range<i64> {
        self.base_index..self.end_index()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.indices().zip(self.values.iter())
    }

    /// Terms at indices `start, start + step, ...` re-based at zero.
    pub fn subsequence(&self, start: i64, step: i64) -> SequenceWindow {
        let mut out = Vec::new();
        let mut n = start;
        while self.contains(n) {
            out.push(self.values[(n - self.base_index) as usize].clone());
            n += step;
        }
        SequenceWindow::new(0, out)
    }

    /// Sub-window restricted to `lo..=hi`.
    pub fn slice(&self, lo: i64, hi: i64) -> Result<SequenceWindow> {
        self.at(lo)?;
        self.at(hi)?;
        let a = (lo - self.base_index) as usize;
        let b = (hi - self.base_index) as usize;
        Ok(SequenceWindow::new(lo, self.values[a..=b].to_vec()))
    }

    pub(crate) fn from_parts(base_index: i64, values: Vec<Rational>) -> Self {
        Self::new(base_index, values)
    }
}

#[derive(Serialize, Deserialize)]
struct WindowRepr {
    base_index: i64,
    values: Vec<String>,
}

impl Serialize for SequenceWindow {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WindowRepr {
            base_index: self.base_index,
            values: self.values.iter().map(format_rational).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SequenceWindow {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = WindowRepr::deserialize(d)?;
        let values = repr
            .values
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(SequenceWindow::new(repr.base_index, values))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn indexing() {
        let w = SequenceWindow::from_integers(-1, &[2, 1, 1, 1]);
        assert_eq!(w.get(-1), Some(&super::super::rat(2)));
        assert!(w.get(3).is_none());
        assert_eq!(w.at(5), Err(Error::IndexOutOfWindow(5)));
        assert_eq!(w.last_index(), 2);
        assert!(!w.has_zero());
        assert!(SequenceWindow::from_integers(0, &[0, 1]).has_zero());
    }

    #[test]
    fn json_shape() {
        let w = SequenceWindow::new(3, vec![ratio(1, 2), ratio(-7, 1)]);
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"base_index":3,"values":["1/2","-7"]}"#);
        let back: SequenceWindow = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
        assert!(serde_json::from_str::<SequenceWindow>(r#"{"base_index":0,"values":["1/0"]}"#).is_err());
    }
}
