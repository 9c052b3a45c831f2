//! Frequency-dependent absorptivity of the thermometer body.
//!
//! By Kirchhoff's law the same coefficient governs emission, so a profile
//! fully characterises how the thermometer couples to radiation.

use crate::error::{check_non_negative, check_positive, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum AbsorptionProfile {
    /// Constant absorptivity `a` at every frequency.
    Gray { a: f64 },
    /// Unit absorptivity on `[center, center + width]`, zero elsewhere.
    Narrowband { center: f64, width: f64 },
    /// Piecewise-constant absorptivity: `a_i` on `[w_i, w_{i+1})`.
    /// Zero below the first and from the last breakpoint onwards, so the
    /// level attached to the last breakpoint is never used.
    Piecewise { breakpoints: Vec<(f64, f64)> },
}

/// A frequency interval on which the profile is constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub lo: f64,
    /// `None` means the segment extends to infinity.
    pub hi: Option<f64>,
    pub level: f64,
}

fn check_level(value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "absorptivity",
            value,
            range: "[0, 1]",
        })
    }
}

impl AbsorptionProfile {
    pub fn gray(a: f64) -> Result<Self> {
        check_level(a)?;
        Ok(AbsorptionProfile::Gray { a })
    }

    pub fn narrowband(center: f64, width: f64) -> Result<Self> {
        check_positive("band center", center)?;
        check_positive("band width", width)?;
        Ok(AbsorptionProfile::Narrowband { center, width })
    }

    pub fn piecewise(breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::InvalidProfile("no breakpoints".into()));
        }
        for &(w, a) in &breakpoints {
            check_non_negative("breakpoint frequency", w)?;
            check_level(a)?;
        }
        if breakpoints.windows(2).any(|p| p[1].0 <= p[0].0) {
            return Err(Error::InvalidProfile(
                "breakpoint frequencies must be strictly increasing".into(),
            ));
        }
        Ok(AbsorptionProfile::Piecewise { breakpoints })
    }

    /// Parses a two-column `frequency absorptivity` table. Blank lines and
    /// lines starting with `#` are skipped; columns may be separated by
    /// whitespace or a comma.
    pub fn from_breakpoint_table(text: &str) -> Result<Self> {
        let mut breakpoints = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|_| {
                    Error::InvalidProfile(format!("line {}: bad number {s:?}", lineno + 1))
                })
            };
            match cols.as_slice() {
                [w, a] => breakpoints.push((parse(w)?, parse(a)?)),
                _ => {
                    return Err(Error::InvalidProfile(format!(
                        "line {}: expected two columns",
                        lineno + 1
                    )))
                }
            }
        }
        Self::piecewise(breakpoints)
    }

    /// Evaluates `A(omega)`.
    pub fn value(&self, omega: f64) -> Result<f64> {
        check_non_negative("omega", omega)?;
        Ok(self.value_unchecked(omega))
    }

    pub(crate) fn value_unchecked(&self, omega: f64) -> f64 {
        match self {
            AbsorptionProfile::Gray { a } => *a,
            AbsorptionProfile::Narrowband { center, width } => {
                if omega >= *center && omega <= center + width {
                    1.0
                } else {
                    0.0
                }
            }
            AbsorptionProfile::Piecewise { breakpoints } => {
                let idx = breakpoints.partition_point(|&(w, _)| w <= omega);
                if idx == 0 || idx == breakpoints.len() {
                    0.0
                } else {
                    breakpoints[idx - 1].1
                }
            }
        }
    }

    /// Intervals of constant nonzero absorptivity, in increasing order.
    pub fn segments(&self) -> Vec<Segment> {
        match self {
            AbsorptionProfile::Gray { a } if *a > 0.0 => vec![Segment {
                lo: 0.0,
                hi: None,
                level: *a,
            }],
            AbsorptionProfile::Gray { .. } => Vec::new(),
            AbsorptionProfile::Narrowband { center, width } => vec![Segment {
                lo: *center,
                hi: Some(center + width),
                level: 1.0,
            }],
            AbsorptionProfile::Piecewise { breakpoints } => breakpoints
                .windows(2)
                .filter(|p| p[0].1 > 0.0)
                .map(|p| Segment {
                    lo: p[0].0,
                    hi: Some(p[1].0),
                    level: p[0].1,
                })
                .collect(),
        }
    }

    pub fn is_identically_zero(&self) -> bool {
        self.segments().is_empty()
    }

    /// Multiplies the absorptivity by `factor` in `[0, 1]`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        check_level(factor)?;
        match self {
            AbsorptionProfile::Gray { a } => Self::gray(a * factor),
            AbsorptionProfile::Narrowband { center, width } => {
                Self::piecewise(vec![(*center, factor), (center + width, 0.0)])
            }
            AbsorptionProfile::Piecewise { breakpoints } => Self::piecewise(
                breakpoints.iter().map(|&(w, a)| (w, a * factor)).collect(),
            ),
        }
    }
}

pub fn absorption_value(profile: &AbsorptionProfile, omega: f64) -> Result<f64> {
    profile.value(omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn staircase() -> AbsorptionProfile {
        AbsorptionProfile::piecewise(vec![
            (0.5, 0.2),
            (1.0, 0.9),
            (2.0, 0.4),
            (3.5, 1.0),
            (5.0, 0.1),
            (8.0, 0.7),
        ])
        .unwrap()
    }

    #[test]
    fn examples() {
        let g = AbsorptionProfile::gray(0.5).unwrap();
        assert_eq!(absorption_value(&g, 7.3).unwrap(), 0.5);
        let b = AbsorptionProfile::narrowband(3.0, 0.1).unwrap();
        assert_eq!(absorption_value(&b, 3.05).unwrap(), 1.0);
        assert_eq!(absorption_value(&b, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn negative_frequency_rejected() {
        let g = AbsorptionProfile::gray(1.0).unwrap();
        assert!(matches!(g.value(-1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn piecewise_levels() {
        let p = staircase();
        assert_eq!(p.value(0.1).unwrap(), 0.0);
        assert_eq!(p.value(0.5).unwrap(), 0.2);
        assert_eq!(p.value(1.999).unwrap(), 0.9);
        assert_eq!(p.value(4.0).unwrap(), 1.0);
        assert_eq!(p.value(8.0).unwrap(), 0.0);
        assert_eq!(p.value(100.0).unwrap(), 0.0);
        assert_eq!(p.segments().len(), 5);
    }

    #[test]
    fn invalid_profiles() {
        assert!(AbsorptionProfile::gray(1.2).is_err());
        assert!(AbsorptionProfile::narrowband(3.0, 0.0).is_err());
        assert!(AbsorptionProfile::narrowband(-3.0, 0.1).is_err());
        assert!(AbsorptionProfile::piecewise(vec![(1.0, 0.5), (1.0, 0.2)]).is_err());
        assert!(AbsorptionProfile::piecewise(vec![]).is_err());
    }

    #[test]
    fn table_parsing() {
        let p = AbsorptionProfile::from_breakpoint_table("# w a\n0.5 0.2\n1.0, 0.9\n\n2.0 0\n")
            .unwrap();
        assert_eq!(p.value(0.7).unwrap(), 0.2);
        assert_eq!(p.value(1.5).unwrap(), 0.9);
        assert!(AbsorptionProfile::from_breakpoint_table("1.0").is_err());
        assert!(AbsorptionProfile::from_breakpoint_table("1.0 x").is_err());
    }

    #[test]
    fn zero_profiles() {
        assert!(AbsorptionProfile::gray(0.0).unwrap().is_identically_zero());
        assert!(AbsorptionProfile::piecewise(vec![(1.0, 0.0), (2.0, 0.5)])
            .unwrap()
            .is_identically_zero());
        assert!(!staircase().is_identically_zero());
    }

    proptest! {
        #[test]
        fn value_in_unit_interval(omega in 0.0f64..20.0, a in 0.0f64..=1.0, f in 0.01f64..10.0) {
            for p in [
                AbsorptionProfile::gray(a).unwrap(),
                AbsorptionProfile::narrowband(f, 0.1 * f).unwrap(),
                staircase(),
            ] {
                let v = p.value(omega).unwrap();
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }
    }
}
