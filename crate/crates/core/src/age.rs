use core::fmt;
use core::str::FromStr;

/// Child age in the CHILDES `years;months.days` notation, e.g. `1;9.7`.
///
/// The day part is optional on input (`2;0` parses as `2;0.0`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Age {
    pub years: u8,
    pub months: u8,
    pub days: u8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseAgeError;

impl fmt::Display for ParseAgeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("age must be written as years;months.days")
    }
}

impl core::error::Error for ParseAgeError {}

impl Age {
    pub const fn new(years: u8, months: u8, days: u8) -> Self {
        Age {
            years,
            months,
            days,
        }
    }
}

impl FromStr for Age {
    type Err = ParseAgeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (years, rest) = s.split_once(';').ok_or(ParseAgeError)?;
        let (months, days) = match rest.split_once('.') {
            Some((m, d)) => (m, d),
            None => (rest, "0"),
        };
        let num = |part: &str| part.parse::<u8>().map_err(|_| ParseAgeError);
        let age = Age::new(num(years)?, num(months)?, num(days)?);
        if age.months > 11 || age.days > 31 {
            return Err(ParseAgeError);
        }
        Ok(age)
    }
}

impl fmt::Display for Age {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}.{}", self.years, self.months, self.days)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Age {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Age {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = <alloc::string::String as serde::Deserialize>::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
