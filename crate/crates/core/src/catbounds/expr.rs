//! Class expressions over declared atoms, with degree and space typing.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{CatError, FactBase};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassKind {
    Homology,
    Cohomology,
}

/// A space an atom lives on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Space {
    pub name: String,
    pub dim: usize,
    pub closed_manifold: bool,
    pub connected: bool,
    /// Declared Lusternik-Schnirelmann category.
    pub cat: Option<u64>,
}

/// A named class with declared degree, space and coefficient tag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Atom {
    pub name: String,
    pub kind: ClassKind,
    pub degree: usize,
    pub space: String,
    pub coefficients: String,
    /// Declared to be the zero class.
    pub zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassExpr {
    Atom(String),
    /// `u ∩ z` for a cohomology class `u` and a homology class `z`.
    Cap(Box<ClassExpr>, Box<ClassExpr>),
    Cross(Box<ClassExpr>, Box<ClassExpr>),
    WedgeSum(Box<ClassExpr>, Box<ClassExpr>),
    /// Image under a morphism of coefficient systems.
    Push(String, Box<ClassExpr>),
    /// The Poincaré dual cohomology class of a homology class.
    Dual(Box<ClassExpr>),
}

impl ClassExpr {
    pub fn atom(name: &str) -> Self {
        ClassExpr::Atom(name.to_string())
    }

    pub fn cap(u: ClassExpr, z: ClassExpr) -> Self {
        ClassExpr::Cap(Box::new(u), Box::new(z))
    }

    pub fn cross(a: ClassExpr, b: ClassExpr) -> Self {
        ClassExpr::Cross(Box::new(a), Box::new(b))
    }

    pub fn wedge(a: ClassExpr, b: ClassExpr) -> Self {
        ClassExpr::WedgeSum(Box::new(a), Box::new(b))
    }

    pub fn push(f: &str, z: ClassExpr) -> Self {
        ClassExpr::Push(f.to_string(), Box::new(z))
    }

    pub fn dual(z: ClassExpr) -> Self {
        ClassExpr::Dual(Box::new(z))
    }

    /// Left-nested cross product of several classes.
    pub fn cross_all(mut factors: impl Iterator<Item = ClassExpr>) -> Option<Self> {
        let first = factors.next()?;
        Some(factors.fold(first, ClassExpr::cross))
    }

    pub fn children(&self) -> Vec<&ClassExpr> {
        match self {
            ClassExpr::Atom(_) => vec![],
            ClassExpr::Cap(a, b) | ClassExpr::Cross(a, b) | ClassExpr::WedgeSum(a, b) => vec![a, b],
            ClassExpr::Push(_, a) | ClassExpr::Dual(a) => vec![a],
        }
    }

    /// The maximal subexpressions that are not themselves cross products.
    pub fn cross_factors(&self) -> Vec<&ClassExpr> {
        match self {
            ClassExpr::Cross(a, b) => {
                let mut v = a.cross_factors();
                v.extend(b.cross_factors());
                v
            }
            other => vec![other],
        }
    }

    pub fn parse(s: &str) -> Result<Self, CatError> {
        let mut p = Parser {
            s: s.as_bytes(),
            pos: 0,
        };
        let e = p.expr()?;
        p.ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassExpr::Atom(n) => write!(f, "{n}"),
            ClassExpr::Cap(a, b) => write!(f, "cap({a}, {b})"),
            ClassExpr::Cross(a, b) => write!(f, "cross({a}, {b})"),
            ClassExpr::WedgeSum(a, b) => write!(f, "wedge({a}, {b})"),
            ClassExpr::Push(g, a) => write!(f, "push({g}, {a})"),
            ClassExpr::Dual(a) => write!(f, "dual({a})"),
        }
    }
}

impl Serialize for ClassExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ClassExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ClassExpr::parse(&s).map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

fn is_ident(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_' || b == b'\'' || b == b'.'
}

impl Parser<'_> {
    fn err(&self, m: &str) -> CatError {
        CatError::Parse(format!("{m} at column {}", self.pos + 1))
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> Result<String, CatError> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && is_ident(self.s[self.pos]) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a name"));
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn eat(&mut self, c: u8) -> Result<(), CatError> {
        self.ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<ClassExpr, CatError> {
        let name = self.ident()?;
        self.ws();
        if self.s.get(self.pos) != Some(&b'(') {
            return Ok(ClassExpr::Atom(name));
        }
        self.pos += 1;
        let e = match name.as_str() {
            "cap" | "cross" | "wedge" => {
                let a = self.expr()?;
                self.eat(b',')?;
                let b = self.expr()?;
                match name.as_str() {
                    "cap" => ClassExpr::cap(a, b),
                    "cross" => ClassExpr::cross(a, b),
                    _ => ClassExpr::wedge(a, b),
                }
            }
            "push" => {
                let f = self.ident()?;
                self.eat(b',')?;
                ClassExpr::push(&f, self.expr()?)
            }
            "dual" => ClassExpr::dual(self.expr()?),
            other => return Err(self.err(&format!("unknown constructor {other}"))),
        };
        self.eat(b')')?;
        Ok(e)
    }
}

/// The inferred type of a class expression.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassType {
    pub kind: ClassKind,
    pub degree: usize,
    pub space: String,
    pub dim: usize,
    pub closed_manifold: bool,
    pub connected: bool,
    pub coefficients: String,
}

pub fn type_of(e: &ClassExpr, facts: &FactBase) -> Result<ClassType, CatError> {
    let ill = |m: String| Err(CatError::IllTyped(format!("{e}: {m}")));
    match e {
        ClassExpr::Atom(n) => {
            let a = facts
                .atom(n)
                .ok_or_else(|| CatError::IllTyped(format!("unknown atom {n}")))?;
            let s = facts
                .space(&a.space)
                .ok_or_else(|| CatError::IllTyped(format!("unknown space {}", a.space)))?;
            if a.degree > s.dim {
                return ill(format!("degree {} exceeds dimension {}", a.degree, s.dim));
            }
            Ok(ClassType {
                kind: a.kind,
                degree: a.degree,
                space: s.name.clone(),
                dim: s.dim,
                closed_manifold: s.closed_manifold,
                connected: s.connected,
                coefficients: a.coefficients.clone(),
            })
        }
        ClassExpr::Cap(u, z) => {
            let (tu, tz) = (type_of(u, facts)?, type_of(z, facts)?);
            if tu.kind != ClassKind::Cohomology || tz.kind != ClassKind::Homology {
                return ill("cap needs a cohomology class and a homology class".into());
            }
            if tu.space != tz.space {
                return ill(format!("spaces {} and {} differ", tu.space, tz.space));
            }
            if tu.degree > tz.degree {
                return ill(format!(
                    "cannot cap degree {} into degree {}",
                    tu.degree, tz.degree
                ));
            }
            Ok(ClassType {
                degree: tz.degree - tu.degree,
                coefficients: format!("{}⊗{}", tu.coefficients, tz.coefficients),
                ..tz
            })
        }
        ClassExpr::Cross(a, b) => {
            let (ta, tb) = (type_of(a, facts)?, type_of(b, facts)?);
            if ta.kind != tb.kind {
                return ill("cross of a homology and a cohomology class".into());
            }
            Ok(ClassType {
                kind: ta.kind,
                degree: ta.degree + tb.degree,
                space: format!("{}×{}", ta.space, tb.space),
                dim: ta.dim + tb.dim,
                closed_manifold: ta.closed_manifold && tb.closed_manifold,
                connected: ta.connected && tb.connected,
                coefficients: format!("{}⊠{}", ta.coefficients, tb.coefficients),
            })
        }
        ClassExpr::WedgeSum(a, b) => {
            let (ta, tb) = (type_of(a, facts)?, type_of(b, facts)?);
            if ta.kind != ClassKind::Homology || tb.kind != ClassKind::Homology {
                return ill("wedge sums are formed from homology classes".into());
            }
            if ta.degree != tb.degree {
                return ill(format!("degrees {} and {} differ", ta.degree, tb.degree));
            }
            Ok(ClassType {
                kind: ClassKind::Homology,
                degree: ta.degree,
                space: format!("{}∨{}", ta.space, tb.space),
                dim: ta.dim.max(tb.dim),
                closed_manifold: false,
                connected: ta.connected && tb.connected,
                coefficients: if ta.coefficients == tb.coefficients {
                    ta.coefficients
                } else {
                    format!("{}∨{}", ta.coefficients, tb.coefficients)
                },
            })
        }
        ClassExpr::Push(f, z) => {
            let tz = type_of(z, facts)?;
            if tz.kind != ClassKind::Homology {
                return ill("coefficient change applies to homology classes".into());
            }
            Ok(ClassType {
                coefficients: format!("{f}({})", tz.coefficients),
                ..tz
            })
        }
        ClassExpr::Dual(z) => {
            let tz = type_of(z, facts)?;
            if tz.kind != ClassKind::Homology {
                return ill("duals are taken of homology classes".into());
            }
            if !tz.closed_manifold {
                return ill(format!("{} is not a closed manifold", tz.space));
            }
            Ok(ClassType {
                kind: ClassKind::Cohomology,
                degree: tz.dim - tz.degree,
                coefficients: format!("{}⊗orientation", tz.coefficients),
                ..tz
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for s in [
            "z",
            "cap(u, z)",
            "cross(z1, cross(z2, z3))",
            "push(q, wedge(a, b))",
            "dual(z')",
        ] {
            assert_eq!(ClassExpr::parse(s).unwrap().to_string(), s);
        }
        assert!(ClassExpr::parse("cap(u)").is_err());
        assert!(ClassExpr::parse("frob(u, z)").is_err());
        assert!(ClassExpr::parse("z z").is_err());
    }

    #[test]
    fn cross_factors_flatten() {
        let e = ClassExpr::parse("cross(cross(a, b), push(f, c))").unwrap();
        let names: Vec<String> = e.cross_factors().iter().map(|x| x.to_string()).collect();
        assert_eq!(names, vec!["a", "b", "push(f, c)"]);
    }
}
