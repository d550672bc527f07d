//! Index-dependent noise parameters.
//!
//! A parameter is either a constant or one of a handful of closed-form
//! functions of the step index `n >= 1`. The textual forms accepted by
//! [`Schedule::parse`] are:
//!
//! | form            | value            |
//! |-----------------|------------------|
//! | `c`             | `c`              |
//! | `c*n^p`         | `c * n^p`        |
//! | `c*n^p + d`     | `c * n^p + d`    |
//! | `sqrt(n)`       | `n^(1/2)`        |
//! | `1 - 1/n^2`     | `1 - n^(-2)`     |
//!
//! Numbers may be written as decimals or as fractions (`-1/3`), optionally
//! parenthesised, so `-1*n^(-1/3)` is valid. The coefficient `c` may be
//! omitted (`n^-2`) and `+ d` may be written `- d`.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Schedule<T> {
    Const(T),
    /// `c * n^p`
    Power { c: T, p: T },
    /// `c * n^p + d`
    PowerShift { c: T, p: T, d: T },
    Sqrt,
    OneMinusInvSquare,
}

impl<T: Scalar> Schedule<T> {
    /// Value at index `n >= 1`.
    #[inline]
    pub fn at(&self, n: usize) -> T {
        match *self {
            Schedule::Const(c) => c,
            Schedule::Power { c, p } => c * T::from_index(n).powf(p),
            Schedule::PowerShift { c, p, d } => c * T::from_index(n).powf(p) + d,
            Schedule::Sqrt => T::from_index(n).sqrt(),
            Schedule::OneMinusInvSquare => {
                let nf = T::from_index(n);
                T::one() - (nf * nf).recip()
            }
        }
    }

    pub fn is_const(&self) -> bool {
        match *self {
            Schedule::Const(_) => true,
            Schedule::Power { c, p } | Schedule::PowerShift { c, p, .. } => {
                p == T::zero() || c == T::zero()
            }
            _ => false,
        }
    }

    /// Parses one of the whitelisted forms listed in the module docs.
    pub fn parse(src: &str) -> Result<Self> {
        let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::InvalidParameter(format!("unrecognised schedule expression `{src}`"));
        if s.is_empty() {
            return Err(bad());
        }
        if s == "sqrt(n)" {
            return Ok(Schedule::Sqrt);
        }
        if s == "1-1/n^2" {
            return Ok(Schedule::OneMinusInvSquare);
        }
        let Some(npos) = s.find("n^") else {
            return parse_number(&s).map(Schedule::Const).ok_or_else(bad);
        };
        let coef = &s[..npos];
        let c = match coef {
            "" => T::one(),
            "-" => -T::one(),
            _ => {
                let stripped = coef.strip_suffix('*').ok_or_else(bad)?;
                parse_number(stripped).ok_or_else(bad)?
            }
        };
        let rest = &s[npos + 2..];
        let (p_str, shift) = split_exponent(rest).ok_or_else(bad)?;
        let p = parse_number(p_str).ok_or_else(bad)?;
        match shift {
            None => Ok(Schedule::Power { c, p }),
            Some(d_str) => {
                let d = if let Some(x) = d_str.strip_prefix('+') {
                    parse_number(x).ok_or_else(bad)?
                } else if let Some(x) = d_str.strip_prefix('-') {
                    -parse_number::<T>(x).ok_or_else(bad)?
                } else {
                    return Err(bad());
                };
                Ok(Schedule::PowerShift { c, p, d })
            }
        }
    }
}

/// Splits `p[+d]` where `p` is either parenthesised or a signed number.
fn split_exponent(rest: &str) -> Option<(&str, Option<&str>)> {
    if rest.starts_with('(') {
        let close = rest.find(')')?;
        let tail = &rest[close + 1..];
        Some((&rest[..=close], (!tail.is_empty()).then_some(tail)))
    } else {
        // skip a leading sign, then the exponent runs to the next +/-
        let body_start = usize::from(rest.starts_with('-') || rest.starts_with('+'));
        match rest[body_start..].find(['+', '-']) {
            Some(i) => {
                let cut = body_start + i;
                // exponent of the form `1e-3` keeps its sign
                if rest[..cut].ends_with(['e', 'E']) {
                    return None;
                }
                Some((&rest[..cut], Some(&rest[cut..])))
            }
            None => Some((rest, None)),
        }
    }
}

fn parse_number<T: Scalar>(s: &str) -> Option<T> {
    let s = s
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .unwrap_or(s);
    if let Some((num, den)) = s.split_once('/') {
        let num: f64 = num.parse().ok()?;
        let den: f64 = den.parse().ok()?;
        if den == 0.0 {
            return None;
        }
        T::from_f64(num).zip(T::from_f64(den)).map(|(a, b)| a / b)
    } else {
        let v: f64 = s.parse().ok()?;
        v.is_finite().then(|| T::lit(v))
    }
}

impl<T: Scalar> fmt::Display for Schedule<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::Const(c) => write!(f, "{c}"),
            Schedule::Power { c, p } => write!(f, "{c}*n^({p})"),
            Schedule::PowerShift { c, p, d } => write!(f, "{c}*n^({p}) + ({d})"),
            Schedule::Sqrt => f.write_str("sqrt(n)"),
            Schedule::OneMinusInvSquare => f.write_str("1 - 1/n^2"),
        }
    }
}

impl<T> From<T> for Schedule<T> {
    fn from(c: T) -> Self {
        Schedule::Const(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Schedule<f64> {
        Schedule::parse(s).unwrap()
    }

    #[test]
    fn whitelist_forms() {
        assert_eq!(p("0.25"), Schedule::Const(0.25));
        assert_eq!(p("-1/3"), Schedule::Const(-1.0 / 3.0));
        assert_eq!(p("sqrt(n)"), Schedule::Sqrt);
        assert_eq!(p("1 - 1/n^2"), Schedule::OneMinusInvSquare);
        assert_eq!(p("2*n^3"), Schedule::Power { c: 2.0, p: 3.0 });
        assert_eq!(p("n^-2"), Schedule::Power { c: 1.0, p: -2.0 });
        assert_eq!(
            p("-1*n^(-1/3)"),
            Schedule::Power {
                c: -1.0,
                p: -1.0 / 3.0
            }
        );
        assert_eq!(
            p("1*n^-2 - 1"),
            Schedule::PowerShift {
                c: 1.0,
                p: -2.0,
                d: -1.0
            }
        );
        assert_eq!(
            p("0.5*n^(2) + 3"),
            Schedule::PowerShift {
                c: 0.5,
                p: 2.0,
                d: 3.0
            }
        );
    }

    #[test]
    fn rejects_outside_whitelist() {
        for s in ["", "exp(n)", "n*2", "2*n^", "log(n)", "1/0", "2n^2"] {
            assert!(Schedule::<f64>::parse(s).is_err(), "{s}");
        }
    }

    #[test]
    fn evaluation() {
        assert_eq!(p("sqrt(n)").at(4), 2.0);
        assert_eq!(p("1 - 1/n^2").at(2), 0.75);
        assert!((p("-1*n^(-1/3)").at(8) + 0.5).abs() < 1e-15);
        assert_eq!(p("1*n^-2 - 1").at(2), -0.75);
    }

    #[test]
    fn display_reparses() {
        for s in ["0.25", "sqrt(n)", "1 - 1/n^2", "-1*n^(-1/3)", "1*n^-2 - 1"] {
            let a = p(s);
            assert_eq!(p(&a.to_string()), a, "{s}");
        }
    }

    #[test]
    fn constness() {
        assert!(p("3").is_const());
        assert!(p("2*n^0").is_const());
        assert!(!p("sqrt(n)").is_const());
    }
}
