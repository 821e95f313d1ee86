//! The two-qubit teleportation channels: the maximally entangled pure state,
//! the rank-2/3/4 maximally entangled mixed states, the Werner family, the
//! general MEMS with ordered weights and the general X-shaped channel.
//!
//! Every catalog channel is X-shaped:
//!
//! ```text
//! [ a   0   0   e         ]
//! [ 0   b   c   0         ]
//! [ 0   c*  d   0         ]
//! [ e*  0   0   1-a-b-d   ]
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::density::{DensityMatrix, TAU_PSD};
use crate::error::{Error, Result};
use crate::linalg::{r, ComplexMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    Meps,
    MemsRank2,
    MemsRank3,
    MemsRank4,
    Werner,
    GeneralXZ,
    MemsGeneral,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Meps => "meps",
            Family::MemsRank2 => "mems2",
            Family::MemsRank3 => "mems3",
            Family::MemsRank4 => "mems4",
            Family::Werner => "werner",
            Family::GeneralXZ => "xz",
            Family::MemsGeneral => "mems",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelSpec {
    Meps,
    MemsRank2 {
        p1: f64,
    },
    /// `p1 = p2`, `p4 = 0`.
    MemsRank3 {
        p1: f64,
    },
    /// `p2 = p3 = p4`.
    MemsRank4 {
        p1: f64,
    },
    Werner {
        r: f64,
    },
    GeneralXZ {
        a: f64,
        b: f64,
        c: C64,
        d: f64,
        e: C64,
    },
    MemsGeneral {
        p: [f64; 4],
    },
}

/// Entries of an X-shaped two-qubit matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XParams {
    pub a: f64,
    pub b: f64,
    pub c: C64,
    pub d: f64,
    pub e: C64,
}

impl XParams {
    pub fn last(&self) -> f64 {
        1.0 - self.a - self.b - self.d
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let z = r(0.0);
        let Self { a, b, c, d, e } = *self;
        ComplexMatrix::from_row_major(
            4,
            vec![
                r(a),
                z,
                z,
                e, //
                z,
                r(b),
                c,
                z, //
                z,
                c.conj(),
                r(d),
                z, //
                e.conj(),
                z,
                z,
                r(self.last()),
            ],
        )
        .expect("finite entries")
    }
}

/// A built channel. `warning` is set when the parameters lie outside the
/// family's MEMS ordering range; such channels are still usable but may be
/// unphysical (then `state` carries relaxed validation).
#[derive(Debug, Clone)]
pub struct Channel {
    pub spec: ChannelSpec,
    pub state: DensityMatrix,
    pub warning: Option<String>,
}

impl Channel {
    pub fn matrix(&self) -> &ComplexMatrix {
        self.state.matrix()
    }
}

pub fn werner_to_mems_p1(r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::OutOfRange {
            name: "r",
            value: r,
            range: "[0, 1]",
        });
    }
    Ok((1.0 + 3.0 * r) / 4.0)
}

pub fn mems_p1_to_werner(p1: f64) -> Result<f64> {
    if !(0.25..=1.0).contains(&p1) {
        return Err(Error::OutOfRange {
            name: "p1",
            value: p1,
            range: "[1/4, 1]",
        });
    }
    Ok((4.0 * p1 - 1.0) / 3.0)
}

fn unit_interval(name: &'static str, v: f64) -> Result<()> {
    if !v.is_finite() || !(0.0..=1.0).contains(&v) {
        return Err(Error::InvalidParams(format!(
            "{name} = {v} must lie in [0, 1]"
        )));
    }
    Ok(())
}

impl ChannelSpec {
    pub fn family(&self) -> Family {
        match self {
            ChannelSpec::Meps => Family::Meps,
            ChannelSpec::MemsRank2 { .. } => Family::MemsRank2,
            ChannelSpec::MemsRank3 { .. } => Family::MemsRank3,
            ChannelSpec::MemsRank4 { .. } => Family::MemsRank4,
            ChannelSpec::Werner { .. } => Family::Werner,
            ChannelSpec::GeneralXZ { .. } => Family::GeneralXZ,
            ChannelSpec::MemsGeneral { .. } => Family::MemsGeneral,
        }
    }

    /// The single family parameter (`p1` or `r`) when there is one.
    pub fn parameter(&self) -> Option<f64> {
        match *self {
            ChannelSpec::MemsRank2 { p1 }
            | ChannelSpec::MemsRank3 { p1 }
            | ChannelSpec::MemsRank4 { p1 } => Some(p1),
            ChannelSpec::Werner { r } => Some(r),
            ChannelSpec::MemsGeneral { p } => Some(p[0]),
            ChannelSpec::Meps => Some(1.0),
            ChannelSpec::GeneralXZ { .. } => None,
        }
    }

    /// Same family with a different `p1`/`r`. `None` for families without one.
    pub fn with_parameter(&self, v: f64) -> Option<ChannelSpec> {
        Some(match self {
            ChannelSpec::MemsRank2 { .. } => ChannelSpec::MemsRank2 { p1: v },
            ChannelSpec::MemsRank3 { .. } => ChannelSpec::MemsRank3 { p1: v },
            ChannelSpec::MemsRank4 { .. } => ChannelSpec::MemsRank4 { p1: v },
            ChannelSpec::Werner { .. } => ChannelSpec::Werner { r: v },
            _ => return None,
        })
    }

    /// Rank at interior parameters, where the family fixes it.
    pub fn expected_rank(&self) -> Option<usize> {
        match self {
            ChannelSpec::Meps => Some(1),
            ChannelSpec::MemsRank2 { .. } => Some(2),
            ChannelSpec::MemsRank3 { .. } => Some(3),
            ChannelSpec::MemsRank4 { .. } | ChannelSpec::Werner { .. } => Some(4),
            _ => None,
        }
    }

    /// The X-shaped entries of the family's matrix.
    pub fn x_params(&self) -> XParams {
        let zero = r(0.0);
        match *self {
            ChannelSpec::Meps => XParams {
                a: 0.5,
                b: 0.0,
                c: zero,
                d: 0.0,
                e: r(-0.5),
            },
            ChannelSpec::MemsRank2 { p1 } => XParams {
                a: p1 / 2.0,
                b: 1.0 - p1,
                c: zero,
                d: 0.0,
                e: r(-p1 / 2.0),
            },
            ChannelSpec::MemsRank3 { p1 } => XParams {
                a: (1.0 - p1) / 2.0,
                b: p1,
                c: zero,
                d: 0.0,
                e: r((1.0 - 3.0 * p1) / 2.0),
            },
            ChannelSpec::MemsRank4 { p1 } => XParams {
                a: (1.0 + 2.0 * p1) / 6.0,
                b: (1.0 - p1) / 3.0,
                c: zero,
                d: (1.0 - p1) / 3.0,
                e: r((1.0 - 4.0 * p1) / 6.0),
            },
            ChannelSpec::Werner { r: w } => XParams {
                a: (1.0 + w) / 4.0,
                b: (1.0 - w) / 4.0,
                c: zero,
                d: (1.0 - w) / 4.0,
                e: r(-w / 2.0),
            },
            ChannelSpec::GeneralXZ { a, b, c, d, e } => XParams { a, b, c, d, e },
            ChannelSpec::MemsGeneral {
                p: [p1, p2, p3, p4],
            } => XParams {
                a: (p1 + p3) / 2.0,
                b: p2,
                c: zero,
                d: p4,
                e: r((p3 - p1) / 2.0),
            },
        }
    }

    /// Checks hard constraints and returns the range warning, if any.
    fn validate(&self) -> Result<Option<String>> {
        let ordering = |p1: f64, lo: f64, hi: f64, what: &str| {
            if p1 < lo || p1 > hi {
                Some(format!(
                    "p1 = {p1} outside [{lo:.4}, {hi:.4}] required by {what}; \
                     weights are out of MEMS order"
                ))
            } else {
                None
            }
        };
        match *self {
            ChannelSpec::Meps => Ok(None),
            ChannelSpec::MemsRank2 { p1 } => {
                unit_interval("p1", p1)?;
                Ok(ordering(p1, 0.5, 1.0, "rank 2 (p1 >= p2 = 1-p1)"))
            }
            ChannelSpec::MemsRank3 { p1 } => {
                unit_interval("p1", p1)?;
                Ok(ordering(
                    p1,
                    1.0 / 3.0,
                    0.5,
                    "rank 3 (p1 = p2 >= p3 = 1-2p1 >= 0)",
                ))
            }
            ChannelSpec::MemsRank4 { p1 } => {
                unit_interval("p1", p1)?;
                Ok(ordering(p1, 0.25, 1.0, "rank 4 (p1 >= p2 = p3 = p4)"))
            }
            ChannelSpec::Werner { r } => {
                unit_interval("r", r)?;
                Ok(None)
            }
            ChannelSpec::GeneralXZ { a, b, c, d, e } => {
                for (name, v) in [("a", a), ("b", b), ("d", d)] {
                    if !v.is_finite() || v < 0.0 {
                        return Err(Error::InvalidParams(format!("{name} = {v} must be >= 0")));
                    }
                }
                if !(c.re.is_finite() && c.im.is_finite() && e.re.is_finite() && e.im.is_finite()) {
                    return Err(Error::InvalidParams("c and e must be finite".into()));
                }
                let last = 1.0 - a - b - d;
                if last < -TAU_PSD {
                    return Err(Error::InvalidParams(format!(
                        "1-a-b-d = {last} must be >= 0"
                    )));
                }
                if a * last - e.norm_sqr() < -TAU_PSD {
                    return Err(Error::InvalidParams(format!(
                        "a(1-a-b-d) = {} < |e|^2 = {}",
                        a * last,
                        e.norm_sqr()
                    )));
                }
                if b * d - c.norm_sqr() < -TAU_PSD {
                    return Err(Error::InvalidParams(format!(
                        "bd = {} < |c|^2 = {}",
                        b * d,
                        c.norm_sqr()
                    )));
                }
                Ok(None)
            }
            ChannelSpec::MemsGeneral { p } => {
                for (k, &v) in p.iter().enumerate() {
                    if !v.is_finite() || v < 0.0 {
                        return Err(Error::InvalidParams(format!(
                            "p{} = {v} must be >= 0",
                            k + 1
                        )));
                    }
                }
                for k in 0..3 {
                    if p[k] < p[k + 1] {
                        return Err(Error::InvalidParams(format!(
                            "p{} = {} < p{} = {} violates p1 >= p2 >= p3 >= p4",
                            k + 1,
                            p[k],
                            k + 2,
                            p[k + 1]
                        )));
                    }
                }
                let sum: f64 = p.iter().sum();
                if (sum - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidParams(format!("sum of weights {sum} != 1")));
                }
                Ok(None)
            }
        }
    }

    pub fn build(&self) -> Result<Channel> {
        build(self)
    }
}

/// Builds the channel's density matrix (dims (2, 2)).
pub fn build(spec: &ChannelSpec) -> Result<Channel> {
    let warning = spec.validate()?;
    let mat = spec.x_params().matrix();
    let state = match DensityMatrix::new(mat.clone(), (2, 2)) {
        Ok(s) => s,
        // Out-of-order weights may leave the PSD cone; keep the matrix.
        Err(_) if warning.is_some() => DensityMatrix::new_relaxed(mat, (2, 2))?,
        Err(err) => return Err(err),
    };
    Ok(Channel {
        spec: *spec,
        state,
        warning,
    })
}

fn fmt_complex(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Parses `re`, `re+imi`, `re-imi`, `imi` or `i`.
pub fn parse_complex(text: &str) -> Result<C64> {
    let s = text.trim();
    let bad = || Error::Parse(format!("invalid complex number {text:?}"));
    let num = |t: &str| t.parse::<f64>().map_err(|_| bad());
    let Some(body) = s.strip_suffix('i') else {
        return Ok(r(num(s)?));
    };
    // Split at the last sign that is not a leading sign or an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| match t {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => num(t),
    };
    match split {
        Some(k) => Ok(C64::new(num(&body[..k])?, imag(&body[k..])?)),
        None => Ok(C64::new(0.0, imag(body)?)),
    }
}

impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ChannelSpec::Meps => write!(f, "meps"),
            ChannelSpec::MemsRank2 { p1 } => write!(f, "mems2:p1={p1}"),
            ChannelSpec::MemsRank3 { p1 } => write!(f, "mems3:p1={p1}"),
            ChannelSpec::MemsRank4 { p1 } => write!(f, "mems4:p1={p1}"),
            ChannelSpec::Werner { r } => write!(f, "werner:r={r}"),
            ChannelSpec::GeneralXZ { a, b, c, d, e } => write!(
                f,
                "xz:a={a},b={b},c={},d={d},e={}",
                fmt_complex(c),
                fmt_complex(e)
            ),
            ChannelSpec::MemsGeneral { p } => {
                write!(f, "mems:p1={},p2={},p3={},p4={}", p[0], p[1], p[2], p[3])
            }
        }
    }
}

impl FromStr for ChannelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, rest) = match s.split_once(':') {
            Some((n, r)) => (n, r),
            None => (s, ""),
        };
        let mut fields: Vec<(String, String)> = Vec::new();
        for part in rest.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
            fields.push((k.trim().to_string(), v.trim().to_string()));
        }
        let expect = |keys: &[&str]| -> Result<()> {
            let got: Vec<&str> = fields.iter().map(|(k, _)| k.as_str()).collect();
            if got != keys {
                return Err(Error::Parse(format!(
                    "{name}: expected fields {keys:?}, got {got:?}"
                )));
            }
            Ok(())
        };
        let real = |k: usize| -> Result<f64> {
            fields[k].1.parse().map_err(|_| {
                Error::Parse(format!("{}: not a number: {:?}", fields[k].0, fields[k].1))
            })
        };
        let spec = match name {
            "meps" => {
                expect(&[])?;
                ChannelSpec::Meps
            }
            "mems2" | "mems3" | "mems4" => {
                expect(&["p1"])?;
                let p1 = real(0)?;
                match name {
                    "mems2" => ChannelSpec::MemsRank2 { p1 },
                    "mems3" => ChannelSpec::MemsRank3 { p1 },
                    _ => ChannelSpec::MemsRank4 { p1 },
                }
            }
            "werner" => {
                expect(&["r"])?;
                ChannelSpec::Werner { r: real(0)? }
            }
            "xz" => {
                expect(&["a", "b", "c", "d", "e"])?;
                ChannelSpec::GeneralXZ {
                    a: real(0)?,
                    b: real(1)?,
                    c: parse_complex(&fields[2].1)?,
                    d: real(3)?,
                    e: parse_complex(&fields[4].1)?,
                }
            }
            "mems" => {
                expect(&["p1", "p2", "p3", "p4"])?;
                ChannelSpec::MemsGeneral {
                    p: [real(0)?, real(1)?, real(2)?, real(3)?],
                }
            }
            other => return Err(Error::Parse(format!("unknown channel family {other:?}"))),
        };
        Ok(spec)
    }
}

impl Serialize for ChannelSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
