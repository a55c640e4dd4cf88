//! Radius grids written `A:B:N`, linear or logarithmic.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::NevError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub log: bool,
}

impl RGrid {
    pub fn new(start: f64, stop: f64, count: usize, log: bool) -> Result<Self, NevError> {
        let g = RGrid { start, stop, count, log };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), NevError> {
        if !(self.start.is_finite() && self.stop.is_finite()) || self.start <= 0.0 {
            return Err(NevError::DegenerateGrid(format!("radii must be positive and finite, got {}:{}", self.start, self.stop)));
        }
        if self.count == 0 || self.stop < self.start || (self.count > 1 && self.stop == self.start) {
            return Err(NevError::DegenerateGrid(format!("{}:{}:{}", self.start, self.stop, self.count)));
        }
        Ok(())
    }

    pub fn with_log(mut self, log: bool) -> Self {
        self.log = log;
        self
    }

    pub fn radii(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                let t = k as f64 / n;
                if k + 1 == self.count {
                    self.stop
                } else if self.log {
                    (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp()
                } else {
                    self.start + t * (self.stop - self.start)
                }
            })
            .collect()
    }
}

impl FromStr for RGrid {
    type Err = NevError;

    fn from_str(s: &str) -> Result<Self, NevError> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let bad = || NevError::DegenerateGrid(format!("expected A:B:N, got {s:?}"));
        let [a, b, n] = parts.as_slice() else { return Err(bad()) };
        let g = RGrid {
            start: a.parse().map_err(|_| bad())?,
            stop: b.parse().map_err(|_| bad())?,
            count: n.parse().map_err(|_| bad())?,
            log: false,
        };
        g.validate()?;
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_expand() {
        let g: RGrid = "1:19:10".parse().unwrap();
        assert_eq!(g.radii(), vec![1.0, 3.0, 5.0, 7.0, 9.0, 11.0, 13.0, 15.0, 17.0, 19.0]);
        let l = g.with_log(true).radii();
        assert!((l[0] - 1.0).abs() < 1e-15 && l[9] == 19.0);
        assert!(l.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rejects_degenerate() {
        for s in ["0:5:3", "5:1:3", "1:2:0", "1:1:4", "1:2", "a:b:c"] {
            assert!(s.parse::<RGrid>().is_err(), "{s}");
        }
        assert_eq!("3:3:1".parse::<RGrid>().unwrap().radii(), vec![3.0]);
    }
}
