use std::cmp::Ordering;
use std::fmt::Write;

use crate::error::{Error, Result};

/// A monomial in a polynomial ring, stored as an exponent vector.
///
/// `Ord` is the report order: ascending total degree, ties broken by
/// descending graded reverse lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self(e)
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|e| e * k).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    /// Indices of variables with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > 0).collect()
    }

    pub fn format(&self, vars: &[String]) -> String {
        let mut out = String::new();
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push('*');
            }
            out.push_str(&vars[i]);
            if e > 1 {
                let _ = write!(out, "^{e}");
            }
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    }

    pub fn parse(text: &str, vars: &[String]) -> Result<Monomial> {
        let mut exps = vec![0u32; vars.len()];
        for (name, e) in parse_factors(text).map_err(Error::Malformed)? {
            let i = vars
                .iter()
                .position(|v| *v == name)
                .ok_or_else(|| Error::Malformed(format!("unknown variable {name}")))?;
            exps[i] += e;
        }
        Ok(Monomial(exps))
    }
}

fn grevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let da = self.degree();
        let db = other.degree();
        da.cmp(&db)
            .then_with(|| grevlex_cmp(&other.0, &self.0))
            .then_with(|| self.0.len().cmp(&other.0.len()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Splits monomial text into `(variable, exponent)` factors. `1` is the
/// empty product.
pub fn parse_factors(text: &str) -> std::result::Result<Vec<(String, u32)>, String> {
    let text = text.trim();
    if text == "1" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for factor in text.split('*') {
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => {
                let e: u32 = e
                    .parse()
                    .map_err(|_| format!("bad exponent in {factor:?}"))?;
                (n, e)
            }
            None => (factor, 1),
        };
        let mut chars = name.chars();
        let valid = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(format!("bad variable name {name:?} in monomial {text:?}"));
        }
        out.push((name.to_string(), exp));
    }
    Ok(out)
}

pub fn format_list(ms: &[Monomial], vars: &[String]) -> String {
    ms.iter()
        .map(|m| m.format(vars))
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parse_and_format_round_trip() {
        let v = vars(&["x1", "x2", "y1", "y2"]);
        let m = Monomial::parse("y2*x1^2", &v).unwrap();
        assert_eq!(m.exponents(), &[2, 0, 0, 1]);
        assert_eq!(m.format(&v), "x1^2*y2");
        assert_eq!(Monomial::parse("1", &v).unwrap(), Monomial::one(4));
        assert_eq!(Monomial::one(4).format(&v), "1");
        assert!(Monomial::parse("z", &v).is_err());
        assert!(Monomial::parse("x1^", &v).is_err());
    }

    #[test]
    fn report_order_lists_conifold_generators() {
        let v = vars(&["x1", "x2", "y1", "y2"]);
        let mut ms: Vec<Monomial> = ["x2*y2", "x1*y2", "x2*y1", "x1*y1"]
            .iter()
            .map(|s| Monomial::parse(s, &v).unwrap())
            .collect();
        ms.sort();
        assert_eq!(format_list(&ms, &v), "x1*y1, x2*y1, x1*y2, x2*y2");
    }

    #[test]
    fn division() {
        let a = Monomial::from_exponents(vec![2, 1]);
        let b = Monomial::from_exponents(vec![1, 1]);
        assert!(b.divides(&a));
        assert_eq!(a.checked_div(&b), Some(Monomial::from_exponents(vec![1, 0])));
        assert_eq!(b.checked_div(&a), None);
    }
}
