//! Street attributes and the relative delivery density they induce.
//!
//! Every street carries one level on each of three axes (region, type,
//! zone). Each level maps to a multiplicative penalty in `[0, 1]`, and the
//! relative density of a street is the product of its three penalties.
//! The roulette-wheel mass of a street is its density times its length.

use std::fmt;
use std::str::FromStr;

use crate::error::{DensityError, ParseError};

macro_rules! attribute_enum {
    ($(#[$meta:meta])* $name:ident, $axis:literal, { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];
            pub const AXIS: &'static str = $axis;

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }

            fn index(self) -> usize {
                self as usize
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = DensityError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(DensityError::UnknownLevel {
                        axis: $axis,
                        level: s.to_string(),
                    }),
                }
            }
        }
    };
}

attribute_enum!(
    /// How close a street lies to downtown.
    Region, "region", {
        Central => "central",
        Peripheral => "peripheral",
        Distant => "distant",
        Isolated => "isolated",
    }
);

attribute_enum!(
    /// Street category.
    StreetType, "type", {
        Avenue => "avenue",
        Street => "street",
        Alameda => "alameda",
        Highway => "highway",
    }
);

attribute_enum!(
    /// Economic use of the street.
    Zone, "zone", {
        CommercialIndustrial => "commercial_industrial",
        Mixed => "mixed",
        Residential => "residential",
    }
);

/// The three attribute levels of one street.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreetAttributes {
    pub region: Region,
    pub stype: StreetType,
    pub zone: Zone,
}

impl StreetAttributes {
    pub const fn new(region: Region, stype: StreetType, zone: Zone) -> Self {
        StreetAttributes {
            region,
            stype,
            zone,
        }
    }
}

/// Multiplicative penalties per attribute level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyTable {
    region: [f64; 4],
    stype: [f64; 4],
    zone: [f64; 3],
}

impl Default for PenaltyTable {
    fn default() -> Self {
        PenaltyTable::DEFAULT
    }
}

impl PenaltyTable {
    /// Penalties of the Artur Nogueira benchmark.
    pub const DEFAULT: PenaltyTable = PenaltyTable {
        region: [1.0, 0.75, 0.4, 0.2],
        stype: [1.0, 0.75, 0.4, 0.0],
        zone: [1.0, 0.7, 0.4],
    };

    pub fn region(&self, level: Region) -> f64 {
        self.region[level.index()]
    }

    pub fn street_type(&self, level: StreetType) -> f64 {
        self.stype[level.index()]
    }

    pub fn zone(&self, level: Zone) -> f64 {
        self.zone[level.index()]
    }

    pub fn set_region(&mut self, level: Region, value: f64) -> Result<(), DensityError> {
        self.region[level.index()] = check_multiplier(Region::AXIS, level.as_str(), value)?;
        Ok(())
    }

    pub fn set_street_type(&mut self, level: StreetType, value: f64) -> Result<(), DensityError> {
        self.stype[level.index()] = check_multiplier(StreetType::AXIS, level.as_str(), value)?;
        Ok(())
    }

    pub fn set_zone(&mut self, level: Zone, value: f64) -> Result<(), DensityError> {
        self.zone[level.index()] = check_multiplier(Zone::AXIS, level.as_str(), value)?;
        Ok(())
    }

    /// Sets one multiplier from textual axis and level names.
    pub fn set(&mut self, axis: &str, level: &str, value: f64) -> Result<(), DensityError> {
        match axis {
            "region" => self.set_region(level.parse()?, value),
            "type" => self.set_street_type(level.parse()?, value),
            "zone" => self.set_zone(level.parse()?, value),
            _ => Err(DensityError::UnknownLevel {
                axis: "axis",
                level: axis.to_string(),
            }),
        }
    }

    /// Applies an override file on top of the defaults.
    ///
    /// One `axis level multiplier` triple per line; blank lines and lines
    /// starting with `#` are ignored.
    pub fn parse_overrides(text: &str) -> Result<PenaltyTable, ParseError> {
        let mut table = PenaltyTable::DEFAULT;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [axis, level, value] = fields[..] else {
                return Err(ParseError::new(
                    line_no,
                    format!("expected 'axis level multiplier', got '{line}'"),
                ));
            };
            let value: f64 = value
                .parse()
                .map_err(|_| ParseError::new(line_no, format!("invalid multiplier '{value}'")))?;
            table
                .set(axis, level, value)
                .map_err(|e| ParseError::new(line_no, e.to_string()))?;
        }
        Ok(table)
    }
}

fn check_multiplier(axis: &'static str, level: &str, value: f64) -> Result<f64, DensityError> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(DensityError::MultiplierOutOfRange {
            axis,
            level: level.to_string(),
            value,
        })
    }
}

/// Relative delivery density of a street: the product of its three
/// penalties.
pub fn density(table: &PenaltyTable, attributes: StreetAttributes) -> f64 {
    table.region(attributes.region) * table.street_type(attributes.stype) * table.zone(attributes.zone)
}

/// Relative density from textual attribute levels, as found in street files.
pub fn density_of_levels(
    table: &PenaltyTable,
    region: &str,
    stype: &str,
    zone: &str,
) -> Result<f64, DensityError> {
    let attributes = StreetAttributes::new(region.parse()?, stype.parse()?, zone.parse()?);
    Ok(density(table, attributes))
}

/// Roulette-wheel mass of a street of the given length.
pub fn street_weight(length: f64, density: f64) -> f64 {
    debug_assert!(density >= 0.0 && length >= 0.0);
    density * length
}
