use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ExprError {
    /// 1-based character offset within the expression text.
    pub column: usize,
    pub message: String,
}

/// Product of powers of named symbols; no factors means `1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExprMonomial {
    factors: Vec<(String, u32)>,
}

impl ExprMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(factors: Vec<(String, u32)>) -> Self {
        Self { factors }
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.factors
    }
}

/// Unevaluated polynomial: a sum of monomials over GF(2).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Expr {
    monomials: Vec<ExprMonomial>,
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

impl Expr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self {
            monomials: vec![ExprMonomial::one()],
        }
    }

    pub fn symbol(name: impl Into<String>) -> Self {
        Self {
            monomials: vec![ExprMonomial::new(vec![(name.into(), 1)])],
        }
    }

    pub fn from_monomials(monomials: Vec<ExprMonomial>) -> Self {
        Self { monomials }
    }

    pub fn monomials(&self) -> &[ExprMonomial] {
        &self.monomials
    }

    /// Parses `m + m + ...` where each `m` is `0`, `1`, or `ID` / `ID^INT`
    /// factors joined by `*`. Whitespace is ignored.
    pub fn parse(text: &str) -> Result<Self, ExprError> {
        let chars: Vec<(usize, char)> = text
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| (i + 1, c))
            .collect();
        let end_col = text.chars().count() + 1;
        let err = |column: usize, message: &str| ExprError {
            column,
            message: message.to_string(),
        };
        if chars.is_empty() {
            return Err(err(1, "empty expression"));
        }
        let mut monomials = Vec::new();
        for chunk in chars.split(|&(_, c)| c == '+') {
            if chunk.is_empty() {
                let col = chars.iter().find(|(_, c)| *c == '+').map_or(end_col, |&(i, _)| i);
                return Err(err(col, "empty term around `+`"));
            }
            let word: String = chunk.iter().map(|&(_, c)| c).collect();
            match word.as_str() {
                "0" => continue,
                "1" => {
                    monomials.push(ExprMonomial::one());
                    continue;
                }
                _ => {}
            }
            let mut factors = Vec::new();
            let mut offset = 0;
            for factor in word.split('*') {
                let col = chunk.get(offset).map_or(end_col, |&(i, _)| i);
                offset += factor.chars().count() + 1;
                let (name, power) = match factor.split_once('^') {
                    Some((name, power)) => {
                        let power: u32 = power
                            .parse()
                            .map_err(|_| err(col, &format!("bad exponent in `{factor}`")))?;
                        (name, power)
                    }
                    None => (factor, 1),
                };
                if !is_identifier(name) {
                    let msg = if name.is_empty() {
                        "missing factor".to_string()
                    } else {
                        format!("`{name}` is not an identifier")
                    };
                    return Err(err(col, &msg));
                }
                factors.push((name.to_string(), power));
            }
            monomials.push(ExprMonomial::new(factors));
        }
        Ok(Self { monomials })
    }
}

impl fmt::Display for ExprMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (k, (name, power)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *power == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{power}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return write!(f, "0");
        }
        for (k, m) in self.monomials.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}
