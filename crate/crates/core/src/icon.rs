//! Assembled icons and their canonical text code.
//!
//! Grammar: `<color>.<shape>.<pictogram|_>.<mod1+mod2+...|_>`, modifiers in
//! lexicographic order.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    /// Red: current state of the patient.
    Current,
    /// Orange: risk of a future state.
    Risk,
    /// Brown: past state.
    Past,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::Current, Color::Risk, Color::Past];

    pub fn as_str(self) -> &'static str {
        match self {
            Color::Current => "current",
            Color::Risk => "risk",
            Color::Past => "past",
        }
    }
}

impl FromStr for Color {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Color::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown color '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Shape {
    /// Circle: physiological state.
    Physio,
    /// Square: pathological state.
    Patho,
}

impl Shape {
    pub const ALL: [Shape; 2] = [Shape::Physio, Shape::Patho];

    pub fn as_str(self) -> &'static str {
        match self {
            Shape::Physio => "physio",
            Shape::Patho => "patho",
        }
    }
}

impl FromStr for Shape {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Shape::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown base shape '{s}'"))
    }
}

/// Primitive codes are lowercase tokens: `[a-z0-9][a-z0-9_]*`.
pub fn is_valid_token(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase() || c.is_ascii_digit())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Icon {
    pub color: Color,
    pub shape: Shape,
    /// `None` is the absent pictogram.
    pub pictogram: Option<String>,
    pub modifiers: BTreeSet<String>,
}

impl Icon {
    pub fn new<I, S>(color: Color, shape: Shape, pictogram: Option<&str>, modifiers: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Icon {
            color,
            shape,
            pictogram: pictogram.map(str::to_string),
            modifiers: modifiers.into_iter().map(Into::into).collect(),
        }
    }

    /// The "disorder" icon: current, pathological, nothing else.
    pub fn generic() -> Self {
        Icon {
            color: Color::Current,
            shape: Shape::Patho,
            pictogram: None,
            modifiers: BTreeSet::new(),
        }
    }

    pub fn is_generic(&self) -> bool {
        self.pictogram.is_none() && self.modifiers.is_empty()
    }

    pub fn code(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Icon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}.{}.{}.",
            self.color.as_str(),
            self.shape.as_str(),
            self.pictogram.as_deref().unwrap_or("_")
        )?;
        if self.modifiers.is_empty() {
            f.write_str("_")
        } else {
            let mods: Vec<&str> = self.modifiers.iter().map(String::as_str).collect();
            f.write_str(&mods.join("+"))
        }
    }
}

impl FromStr for Icon {
    type Err = Error;

    fn from_str(code: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| Error::IconCode {
            code: code.to_string(),
            reason: reason.to_string(),
        };
        let parts: Vec<&str> = code.split('.').collect();
        let [color, shape, pictogram, modifiers] = parts.as_slice() else {
            return Err(bad("expected four dot-separated fields"));
        };
        let color: Color = color.parse().map_err(|e: String| bad(&e))?;
        let shape: Shape = shape.parse().map_err(|e: String| bad(&e))?;
        let pictogram = match *pictogram {
            "_" => None,
            p if is_valid_token(p) => Some(p.to_string()),
            _ => return Err(bad("invalid pictogram token")),
        };
        let mut mods = BTreeSet::new();
        if *modifiers != "_" {
            let mut prev: Option<&str> = None;
            for m in modifiers.split('+') {
                if !is_valid_token(m) {
                    return Err(bad("invalid modifier token"));
                }
                if prev.is_some_and(|p| p >= m) {
                    return Err(bad("modifiers must be unique and sorted"));
                }
                prev = Some(m);
                mods.insert(m.to_string());
            }
        }
        Ok(Icon {
            color,
            shape,
            pictogram,
            modifiers: mods,
        })
    }
}
