//! The sixteen two-input gate gadgets and their text serialization.

use std::fmt;
use std::str::FromStr;

use super::{Gadget, Role};
use crate::error::{Error, Result};
use crate::polynomial::{parse_bool_poly, BooleanPoly};
use crate::scalar::Scalar;

pub const CATALOGUE_VERSION: u32 = 1;

/// Shipped catalogue text; regenerated by the test suite.
pub const CATALOGUE_V1: &str = include_str!("../../data/catalogue_v1.txt");

/// Two-input Boolean functions `z = f(x1, x2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateFn {
    Zero,
    One,
    Nor,
    Nx1AndX2,
    And,
    X1AndNx2,
    Or,
    X1OrNx2,
    Nand,
    Nx1OrX2,
    NotX1,
    CopyX2,
    CopyX1,
    NotX2,
    Xor,
    Eqv,
}

impl GateFn {
    pub const ALL: [GateFn; 16] = [
        GateFn::Zero,
        GateFn::One,
        GateFn::Nor,
        GateFn::Nx1AndX2,
        GateFn::And,
        GateFn::X1AndNx2,
        GateFn::Or,
        GateFn::X1OrNx2,
        GateFn::Nand,
        GateFn::Nx1OrX2,
        GateFn::NotX1,
        GateFn::CopyX2,
        GateFn::CopyX1,
        GateFn::NotX2,
        GateFn::Xor,
        GateFn::Eqv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateFn::Zero => "ZERO",
            GateFn::One => "ONE",
            GateFn::Nor => "NOR",
            GateFn::Nx1AndX2 => "NX1_AND_X2",
            GateFn::And => "AND",
            GateFn::X1AndNx2 => "X1_AND_NX2",
            GateFn::Or => "OR",
            GateFn::X1OrNx2 => "X1_OR_NX2",
            GateFn::Nand => "NAND",
            GateFn::Nx1OrX2 => "NX1_OR_X2",
            GateFn::NotX1 => "NOT_X1",
            GateFn::CopyX2 => "COPY_X2",
            GateFn::CopyX1 => "COPY_X1",
            GateFn::NotX2 => "NOT_X2",
            GateFn::Xor => "XOR",
            GateFn::Eqv => "EQV",
        }
    }

    pub fn eval(self, x1: bool, x2: bool) -> bool {
        match self {
            GateFn::Zero => false,
            GateFn::One => true,
            GateFn::Nor => !x1 && !x2,
            GateFn::Nx1AndX2 => !x1 && x2,
            GateFn::And => x1 && x2,
            GateFn::X1AndNx2 => x1 && !x2,
            GateFn::Or => x1 || x2,
            GateFn::X1OrNx2 => x1 || !x2,
            GateFn::Nand => !x1 || !x2,
            GateFn::Nx1OrX2 => !x1 || x2,
            GateFn::NotX1 => !x1,
            GateFn::CopyX2 => x2,
            GateFn::CopyX1 => x1,
            GateFn::NotX2 => !x2,
            GateFn::Xor => x1 != x2,
            GateFn::Eqv => x1 == x2,
        }
    }

    /// Four-bit code: bit `2*x1 + x2` holds `f(x1, x2)`.
    pub fn code(self) -> u8 {
        (0..4).fold(0, |acc, r| acc | (u8::from(self.eval(r & 2 != 0, r & 1 != 0)) << r))
    }

    pub fn from_code(code: u8) -> Option<GateFn> {
        GateFn::ALL.into_iter().find(|g| g.code() == code)
    }

    /// The function with input `i` (0 or 1) complemented.
    pub fn negate_input(self, i: usize) -> GateFn {
        let code = (0..4u8).fold(0, |acc, r| {
            let src = r ^ if i == 0 { 2 } else { 1 };
            acc | (((self.code() >> src) & 1) << r)
        });
        GateFn::from_code(code).expect("all sixteen functions are listed")
    }

    /// Relation over `(x1, x2, z)`: row `4*x1 + 2*x2 + z` holds when
    /// `z == f(x1, x2)`.
    pub fn relation(self) -> Vec<bool> {
        (0..8)
            .map(|r| (r & 1 != 0) == self.eval(r & 4 != 0, r & 2 != 0))
            .collect()
    }
}

impl fmt::Display for GateFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateFn {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase();
        let alias = match up.as_str() {
            "XNOR" => "EQV",
            "FALSE" => "ZERO",
            "TRUE" => "ONE",
            other => other,
        };
        GateFn::ALL
            .into_iter()
            .find(|g| g.name() == alias)
            .ok_or_else(|| Error::UnknownGadget(s.to_string()))
    }
}

fn poly<S: Scalar>(text: &str, n: usize) -> BooleanPoly<S> {
    parse_bool_poly(text, Some(n)).expect("catalogue polynomial")
}

const AND: &str = "3*x2 + x0*x1 - 2*x0*x2 - 2*x1*x2";
const OR: &str = "x0 + x1 + 2*x2 + 2*x0*x1 - 3*x0*x2 - 3*x1*x2";
const XOR: &str = "2*x0 + 2*x1 + 2*x2 + 8*x3 + 4*x0*x1 + 4*x0*x2 - 8*x0*x3 + 4*x1*x2 - 8*x1*x3 - 8*x2*x3";

fn penalty_for<S: Scalar>(f: GateFn) -> (BooleanPoly<S>, S) {
    let neg = |p: BooleanPoly<S>, vars: &[usize]| -> BooleanPoly<S> {
        vars.iter().fold(p, |p, &v| p.negate_var(v).expect("slot in range"))
    };
    let one = S::one();
    match f {
        GateFn::Zero => (poly("x2", 3), one),
        GateFn::One => (poly("1 - x2", 3), one),
        GateFn::And => (poly(AND, 3), one),
        GateFn::Nx1AndX2 => (neg(poly(AND, 3), &[0]), one),
        GateFn::X1AndNx2 => (neg(poly(AND, 3), &[1]), one),
        GateFn::Nor => (neg(poly(AND, 3), &[0, 1]), one),
        GateFn::Or => (poly(OR, 3), one),
        GateFn::X1OrNx2 => (neg(poly(OR, 3), &[1]), one),
        GateFn::Nx1OrX2 => (neg(poly(OR, 3), &[0]), one),
        GateFn::Nand => (neg(poly(OR, 3), &[0, 1]), one),
        GateFn::CopyX1 => (poly("x0 + x2 - 2*x0*x2", 3), one),
        GateFn::NotX1 => (poly("1 - x0 - x2 + 2*x0*x2", 3), one),
        GateFn::CopyX2 => (poly("x1 + x2 - 2*x1*x2", 3), one),
        GateFn::NotX2 => (poly("1 - x1 - x2 + 2*x1*x2", 3), one),
        GateFn::Xor => (poly(XOR, 4), S::two()),
        GateFn::Eqv => (neg(poly(XOR, 4), &[1]), S::two()),
    }
}

/// The catalogued gadget for `f`, with slots `x1, x2, z` and, for XOR and
/// EQV, one mediator `m`.
pub fn lookup<S: Scalar>(f: GateFn) -> Gadget<S> {
    let (penalty, gap) = penalty_for::<S>(f);
    let mut slot_names: Vec<String> = ["x1", "x2", "z"].iter().map(|s| s.to_string()).collect();
    let mut roles = vec![Role::Input, Role::Input, Role::Output];
    if penalty.num_vars() == 4 {
        slot_names.push("m".into());
        roles.push(Role::Mediator);
    }
    Gadget::new(f.name(), slot_names, roles, penalty, gap, f.relation()).expect("catalogue gadget is well formed")
}

/// All sixteen gadgets in table order.
pub fn builtin_catalogue<S: Scalar>() -> Vec<Gadget<S>> {
    GateFn::ALL.into_iter().map(lookup).collect()
}

/// The shipped data file, parsed.
pub fn embedded_catalogue<S: Scalar>() -> Result<Vec<Gadget<S>>> {
    parse_catalogue(CATALOGUE_V1)
}

pub fn write_catalogue<S: Scalar>(gadgets: &[Gadget<S>]) -> String {
    let mut out = format!("# two-input gate gadgets\nversion {CATALOGUE_VERSION}\n");
    for g in gadgets {
        out.push('\n');
        out.push_str(&format!("gadget {}\n", g.name));
        let slots: Vec<String> = g
            .slot_names
            .iter()
            .zip(&g.roles)
            .map(|(n, r)| format!("{n}:{r}"))
            .collect();
        out.push_str(&format!("slots {}\n", slots.join(" ")));
        out.push_str(&format!("gap {}\n", g.gap.to_text()));
        let rel: String = g.relation.iter().map(|&b| if b { '1' } else { '0' }).collect();
        out.push_str(&format!("relation {rel}\n"));
        out.push_str(&format!("penalty {}\n", g.penalty));
    }
    out
}

#[derive(Default)]
struct Pending {
    name: Option<String>,
    slots: Option<(Vec<String>, Vec<Role>)>,
    gap: Option<String>,
    relation: Option<Vec<bool>>,
    penalty: Option<String>,
    line: usize,
}

impl Pending {
    fn finish<S: Scalar>(self) -> Result<Gadget<S>> {
        let line = self.line;
        let missing = |what: &str| Error::parse(line, format!("gadget is missing `{what}`"));
        let name = self.name.ok_or_else(|| missing("gadget"))?;
        let (names, roles) = self.slots.ok_or_else(|| missing("slots"))?;
        let gap_text = self.gap.ok_or_else(|| missing("gap"))?;
        let gap = S::parse_text(&gap_text).ok_or_else(|| Error::parse(line, format!("bad gap {gap_text:?}")))?;
        let relation = self.relation.ok_or_else(|| missing("relation"))?;
        let penalty_text = self.penalty.ok_or_else(|| missing("penalty"))?;
        let penalty = parse_bool_poly(&penalty_text, Some(roles.len()))
            .map_err(|e| Error::parse(line, format!("gadget {name}: {e}")))?;
        Gadget::new(name, names, roles, penalty, gap, relation)
    }
}

/// Parses the catalogue text format written by [`write_catalogue`].
pub fn parse_catalogue<S: Scalar>(text: &str) -> Result<Vec<Gadget<S>>> {
    let mut out = Vec::new();
    let mut version_seen = false;
    let mut cur: Option<Pending> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "version" => {
                let v: u32 = rest.parse().map_err(|_| Error::parse(line_no, "bad version"))?;
                if v != CATALOGUE_VERSION {
                    return Err(Error::parse(line_no, format!("unsupported catalogue version {v}")));
                }
                version_seen = true;
            }
            "gadget" => {
                if let Some(p) = cur.take() {
                    out.push(p.finish()?);
                }
                cur = Some(Pending {
                    name: Some(rest.to_string()),
                    line: line_no,
                    ..Default::default()
                });
            }
            _ => {
                let p = cur
                    .as_mut()
                    .ok_or_else(|| Error::parse(line_no, format!("`{key}` outside a gadget block")))?;
                match key {
                    "slots" => {
                        let mut names = Vec::new();
                        let mut roles = Vec::new();
                        for tok in rest.split_whitespace() {
                            let (n, r) = tok
                                .split_once(':')
                                .ok_or_else(|| Error::parse(line_no, format!("slot {tok:?} lacks a role")))?;
                            names.push(n.to_string());
                            roles.push(r.parse().map_err(|e: Error| Error::parse(line_no, e.to_string()))?);
                        }
                        p.slots = Some((names, roles));
                    }
                    "gap" => p.gap = Some(rest.to_string()),
                    "relation" => {
                        let bits: Result<Vec<bool>> = rest
                            .chars()
                            .map(|c| match c {
                                '0' => Ok(false),
                                '1' => Ok(true),
                                _ => Err(Error::parse(line_no, format!("relation digit {c:?}"))),
                            })
                            .collect();
                        p.relation = Some(bits?);
                    }
                    "penalty" => p.penalty = Some(rest.to_string()),
                    other => return Err(Error::parse(line_no, format!("unknown key `{other}`"))),
                }
            }
        }
    }
    if let Some(p) = cur.take() {
        out.push(p.finish()?);
    }
    if !version_seen {
        return Err(Error::parse(1, "catalogue lacks a version line"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::verify_gadget;
    use num_rational::Rational64 as Q;

    #[test]
    fn names_round_trip() {
        for f in GateFn::ALL {
            assert_eq!(f.name().parse::<GateFn>().unwrap(), f);
            assert_eq!(GateFn::from_code(f.code()), Some(f));
        }
        assert_eq!("xnor".parse::<GateFn>().unwrap(), GateFn::Eqv);
        assert!(matches!("MUX".parse::<GateFn>(), Err(Error::UnknownGadget(_))));
    }

    #[test]
    fn codes_are_distinct() {
        let mut codes: Vec<u8> = GateFn::ALL.iter().map(|f| f.code()).collect();
        codes.sort_unstable();
        codes.dedup();
        assert_eq!(codes.len(), 16);
    }

    #[test]
    fn negation_maps() {
        assert_eq!(GateFn::And.negate_input(0), GateFn::Nx1AndX2);
        assert_eq!(GateFn::And.negate_input(1), GateFn::X1AndNx2);
        assert_eq!(GateFn::Or.negate_input(0).negate_input(1), GateFn::Nand);
        assert_eq!(GateFn::Xor.negate_input(1), GateFn::Eqv);
        assert_eq!(GateFn::CopyX1.negate_input(0), GateFn::NotX1);
    }

    #[test]
    fn every_builtin_gadget_verifies() {
        for g in builtin_catalogue::<Q>() {
            let r = verify_gadget(&g);
            assert!(r.pass, "{}: {:?}", g.name, r.failures);
            let expect_mediators = usize::from(g.name == "XOR" || g.name == "EQV");
            assert_eq!(g.num_mediators(), expect_mediators);
        }
    }

    #[test]
    fn serialization_round_trip() {
        let cat = builtin_catalogue::<Q>();
        let text = write_catalogue(&cat);
        assert_eq!(parse_catalogue::<Q>(&text).unwrap(), cat);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let bad = "version 1\ngadget A\nslots a:input b:wrong\n";
        assert!(matches!(parse_catalogue::<Q>(bad), Err(Error::Parse { line: 3, .. })));
        assert!(parse_catalogue::<Q>("gadget A\n").is_err());
        assert!(parse_catalogue::<Q>("version 2\n").is_err());
    }
}
