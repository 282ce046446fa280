//! The kernel and subspace specification languages.
//!
//! ```text
//! dhb:alpha=1
//! product(dhb:alpha=1, power(fock:beta=2, 0.5))
//! rescale(finite-length-example, affine)
//! vanish:points=[0, [0.2, 0.1]];orders=[2, 1]
//! hardy-inner:zeros=[0.5, [0, -0.3]]
//! ```
//!
//! Whitespace between tokens is ignored and keys are case-sensitive.

use std::path::{Path, PathBuf};

use rkhs_core::kernels::{Kernel, Rescaling};
use rkhs_core::subspaces::SubspaceSpec;
use rkhs_core::{Point, C64};
use serde_json::Value;

use crate::error::{CliError, ParseError, Result};
use crate::formats::{custom_from_json, load_json, moments_from_json};
use crate::points::{complex_from_json, points_from_json};

/// Named nonvanishing functions usable in `rescale(<spec>, <name>)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinScaling {
    /// `G ≡ 1`
    One,
    /// `G ≡ i`
    I,
    /// `G(z) = e^z`
    Exp,
    /// `G(z) = 2 e^{z²/2}`
    ExpSquare,
    /// `G(z) = 2 + z`, disk kernels only
    Affine,
}

impl BuiltinScaling {
    pub const NAMES: [&'static str; 5] = ["one", "i", "exp", "exp-square", "affine"];

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "one" => BuiltinScaling::One,
            "i" => BuiltinScaling::I,
            "exp" => BuiltinScaling::Exp,
            "exp-square" => BuiltinScaling::ExpSquare,
            "affine" => BuiltinScaling::Affine,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            BuiltinScaling::One => "one",
            BuiltinScaling::I => "i",
            BuiltinScaling::Exp => "exp",
            BuiltinScaling::ExpSquare => "exp-square",
            BuiltinScaling::Affine => "affine",
        }
    }

    pub fn rescaling(&self) -> Rescaling {
        let c = |re, im| C64::new(re, im);
        match self {
            BuiltinScaling::One => Rescaling::Constant(c(1.0, 0.0)),
            BuiltinScaling::I => Rescaling::Constant(c(0.0, 1.0)),
            BuiltinScaling::Exp => Rescaling::ExpPolynomial {
                scale: c(1.0, 0.0),
                coeffs: vec![c(0.0, 0.0), c(1.0, 0.0)],
            },
            BuiltinScaling::ExpSquare => Rescaling::ExpPolynomial {
                scale: c(2.0, 0.0),
                coeffs: vec![c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)],
            },
            BuiltinScaling::Affine => Rescaling::Affine {
                a: c(2.0, 0.0),
                b: c(1.0, 0.0),
            },
        }
    }
}

/// Parsed kernel specification; file references are resolved by [`KernelExpr::build`].
#[derive(Debug, Clone, PartialEq)]
pub enum KernelExpr {
    Dhb { alpha: f64 },
    Fock { beta: f64 },
    DruryArveson { n: usize },
    FiniteLength,
    RadialBergman { file: PathBuf },
    Custom { file: PathBuf },
    Product(Box<KernelExpr>, Box<KernelExpr>),
    Power(Box<KernelExpr>, f64),
    Rescale(Box<KernelExpr>, BuiltinScaling),
    DirectSum(Box<KernelExpr>, Box<KernelExpr>),
}

impl KernelExpr {
    /// Constructs the kernel, reading data files relative to `base`.
    pub fn build(&self, base: &Path) -> Result<Kernel> {
        Ok(match self {
            KernelExpr::Dhb { alpha } => Kernel::dhb(*alpha)?,
            KernelExpr::Fock { beta } => Kernel::fock(*beta)?,
            KernelExpr::DruryArveson { n } => Kernel::drury_arveson(*n)?,
            KernelExpr::FiniteLength => Kernel::finite_length_example(),
            KernelExpr::RadialBergman { file } => {
                let path = base.join(file);
                Kernel::radial_bergman(moments_from_json(
                    &load_json(&path)?,
                    &path.display().to_string(),
                )?)?
            }
            KernelExpr::Custom { file } => {
                let path = base.join(file);
                let (points, matrix) =
                    custom_from_json(&load_json(&path)?, &path.display().to_string())?;
                Kernel::custom(points, matrix)?
            }
            KernelExpr::Product(a, b) => Kernel::product(a.build(base)?, b.build(base)?)?,
            KernelExpr::Power(a, alpha) => Kernel::power(a.build(base)?, *alpha)?,
            KernelExpr::Rescale(a, g) => Kernel::rescale(a.build(base)?, g.rescaling())?,
            KernelExpr::DirectSum(a, b) => Kernel::direct_sum(a.build(base)?, b.build(base)?),
        })
    }
}

/// Parsed subspace specification.
#[derive(Debug, Clone, PartialEq)]
pub enum SubspaceExpr {
    VanishOn {
        points: Vec<Point>,
        orders: Option<Vec<usize>>,
    },
    HardyInner {
        zeros: Vec<C64>,
        constant: C64,
    },
}

impl SubspaceExpr {
    pub fn build(&self, parent: Kernel) -> Result<SubspaceSpec> {
        Ok(match self {
            SubspaceExpr::VanishOn { points, orders } => {
                let orders = orders.clone().unwrap_or_else(|| vec![1; points.len()]);
                SubspaceSpec::vanish_on(parent, points.clone(), orders)?
            }
            SubspaceExpr::HardyInner { zeros, constant } => {
                SubspaceSpec::hardy_inner(parent, zeros.clone(), *constant)?
            }
        })
    }
}

struct Param {
    key: String,
    key_at: usize,
    value: String,
    value_at: usize,
}

struct Parser<'a> {
    input: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Parser {
            input,
            chars: input.chars().collect(),
            pos: 0,
        }
    }

    fn error(&self, at: usize, message: impl Into<String>) -> ParseError {
        ParseError::new(self.input, at, message)
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> std::result::Result<(), ParseError> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => Err(self.error(self.pos, format!("expected '{c}', found '{d}'"))),
            None => Err(self.error(self.pos, format!("expected '{c}', found end of input"))),
        }
    }

    fn ident(&mut self) -> std::result::Result<(String, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '-' || *c == '_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            let found = self
                .chars
                .get(start)
                .map_or("end of input".to_string(), |c| format!("'{c}'"));
            return Err(self.error(start, format!("expected a name, found {found}")));
        }
        Ok((self.chars[start..self.pos].iter().collect(), start))
    }

    /// Raw text up to the next top-level `,`, `;` or `)`, with whitespace removed.
    fn raw_value(&mut self) -> std::result::Result<(String, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut depth = 0usize;
        let mut out = String::new();
        while let Some(&c) = self.chars.get(self.pos) {
            match c {
                '[' | '{' => depth += 1,
                ']' | '}' => {
                    depth = depth
                        .checked_sub(1)
                        .ok_or_else(|| self.error(self.pos, format!("unbalanced '{c}'")))?;
                }
                ',' | ';' | ')' if depth == 0 => break,
                _ => {}
            }
            if !c.is_whitespace() {
                out.push(c);
            }
            self.pos += 1;
        }
        if depth > 0 {
            return Err(self.error(start, "unclosed bracket in value"));
        }
        if out.is_empty() {
            return Err(self.error(start, "missing value"));
        }
        Ok((out, start))
    }

    fn params(&mut self) -> std::result::Result<Vec<Param>, ParseError> {
        let mut out: Vec<Param> = Vec::new();
        loop {
            let (key, key_at) = self.ident()?;
            if out.iter().any(|p| p.key == key) {
                return Err(self.error(key_at, format!("duplicate key '{key}'")));
            }
            self.expect('=')?;
            let (value, value_at) = self.raw_value()?;
            out.push(Param {
                key,
                key_at,
                value,
                value_at,
            });
            if self.peek() == Some(';') {
                self.pos += 1;
            } else {
                return Ok(out);
            }
        }
    }

    fn number(&self, p: &Param) -> std::result::Result<f64, ParseError> {
        p.value
            .parse::<f64>()
            .map_err(|_| self.error(p.value_at, format!("'{}' is not a number", p.value)))
    }

    fn take_params<const N: usize>(
        &self,
        name: &str,
        params: Vec<Param>,
        allowed: [&str; N],
    ) -> std::result::Result<[Option<Param>; N], ParseError> {
        let mut slots: [Option<Param>; N] = std::array::from_fn(|_| None);
        for p in params {
            match allowed.iter().position(|k| *k == p.key) {
                Some(i) => slots[i] = Some(p),
                None if N == 0 => {
                    return Err(self.error(p.key_at, format!("'{name}' takes no parameters")))
                }
                None => {
                    return Err(self.error(
                        p.key_at,
                        format!(
                            "unknown key '{}' for '{name}' (expected {})",
                            p.key,
                            allowed.join(", ")
                        ),
                    ))
                }
            }
        }
        Ok(slots)
    }

    fn required(
        &self,
        slot: Option<Param>,
        key: &str,
        name: &str,
    ) -> std::result::Result<Param, ParseError> {
        slot.ok_or_else(|| self.error(self.pos, format!("'{name}' requires '{key}='")))
    }

    fn kernel(&mut self) -> std::result::Result<KernelExpr, ParseError> {
        let (name, name_at) = self.ident()?;
        if self.peek() == Some('(') {
            self.pos += 1;
            let expr = match name.as_str() {
                "product" | "direct-sum" => {
                    let a = self.kernel()?;
                    self.expect(',')?;
                    let b = self.kernel()?;
                    if name == "product" {
                        KernelExpr::Product(Box::new(a), Box::new(b))
                    } else {
                        KernelExpr::DirectSum(Box::new(a), Box::new(b))
                    }
                }
                "power" => {
                    let a = self.kernel()?;
                    self.expect(',')?;
                    let (v, at) = self.raw_value()?;
                    let alpha = v
                        .parse::<f64>()
                        .map_err(|_| self.error(at, format!("'{v}' is not a number")))?;
                    KernelExpr::Power(Box::new(a), alpha)
                }
                "rescale" => {
                    let a = self.kernel()?;
                    self.expect(',')?;
                    let (g, at) = self.ident()?;
                    let g = BuiltinScaling::from_name(&g).ok_or_else(|| {
                        self.error(
                            at,
                            format!("unknown scaling '{g}' (expected one of {})", BuiltinScaling::NAMES.join(", ")),
                        )
                    })?;
                    KernelExpr::Rescale(Box::new(a), g)
                }
                _ => {
                    return Err(self.error(
                        name_at,
                        format!("unknown combinator '{name}' (expected product, power, rescale or direct-sum)"),
                    ))
                }
            };
            self.expect(')')?;
            return Ok(expr);
        }
        let params = if self.peek() == Some(':') {
            self.pos += 1;
            self.params()?
        } else {
            Vec::new()
        };
        let n = name.as_str();
        Ok(match n {
            "dhb" => {
                let [alpha] = self.take_params(n, params, ["alpha"])?;
                KernelExpr::Dhb {
                    alpha: self.number(&self.required(alpha, "alpha", n)?)?,
                }
            }
            "fock" => {
                let [beta] = self.take_params(n, params, ["beta"])?;
                KernelExpr::Fock {
                    beta: self.number(&self.required(beta, "beta", n)?)?,
                }
            }
            "da" => {
                let [dim] = self.take_params(n, params, ["n"])?;
                let p = self.required(dim, "n", n)?;
                let dim = p
                    .value
                    .parse::<usize>()
                    .map_err(|_| self.error(p.value_at, format!("'{}' is not a positive integer", p.value)))?;
                KernelExpr::DruryArveson { n: dim }
            }
            "finite-length-example" => {
                self.take_params(n, params, [])?;
                KernelExpr::FiniteLength
            }
            "radial-bergman" | "custom" => {
                let [file] = self.take_params(n, params, ["file"])?;
                let file = PathBuf::from(self.required(file, "file", n)?.value);
                if n == "custom" {
                    KernelExpr::Custom { file }
                } else {
                    KernelExpr::RadialBergman { file }
                }
            }
            _ => {
                return Err(self.error(
                    name_at,
                    format!(
                        "unknown kernel '{name}' (expected dhb, fock, da, finite-length-example, radial-bergman, custom, \
                         product, power, rescale or direct-sum)"
                    ),
                ))
            }
        })
    }

    fn json(&self, p: &Param) -> std::result::Result<Value, ParseError> {
        serde_json::from_str(&p.value).map_err(|e| {
            self.error(
                p.value_at + e.column().saturating_sub(1),
                format!("invalid JSON: {e}"),
            )
        })
    }

    fn subspace(&mut self) -> std::result::Result<SubspaceExpr, ParseError> {
        let (name, name_at) = self.ident()?;
        self.expect(':')?;
        let params = self.params()?;
        let n = name.as_str();
        match n {
            "vanish" => {
                let [points, orders] = self.take_params(n, params, ["points", "orders"])?;
                let points = self.required(points, "points", n)?;
                let pts = points_from_json(&self.json(&points)?)
                    .map_err(|m| self.error(points.value_at, m))?;
                let orders = match orders {
                    Some(p) => {
                        let v = self.json(&p)?;
                        let list = v
                            .as_array()
                            .and_then(|a| {
                                a.iter()
                                    .map(|o| o.as_u64().map(|o| o as usize))
                                    .collect::<Option<Vec<_>>>()
                            })
                            .ok_or_else(|| {
                                self.error(p.value_at, "orders must be a list of integers")
                            })?;
                        if list.len() != pts.len() {
                            return Err(self.error(
                                p.value_at,
                                format!("{} orders given for {} points", list.len(), pts.len()),
                            ));
                        }
                        Some(list)
                    }
                    None => None,
                };
                Ok(SubspaceExpr::VanishOn {
                    points: pts,
                    orders,
                })
            }
            "hardy-inner" => {
                let [zeros, constant] = self.take_params(n, params, ["zeros", "constant"])?;
                let zeros = self.required(zeros, "zeros", n)?;
                let list = self
                    .json(&zeros)?
                    .as_array()
                    .ok_or_else(|| self.error(zeros.value_at, "zeros must be a list"))?
                    .iter()
                    .map(complex_from_json)
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|m| self.error(zeros.value_at, m))?;
                let constant = match constant {
                    Some(p) => {
                        complex_from_json(&self.json(&p)?).map_err(|m| self.error(p.value_at, m))?
                    }
                    None => C64::new(1.0, 0.0),
                };
                Ok(SubspaceExpr::HardyInner {
                    zeros: list,
                    constant,
                })
            }
            _ => Err(self.error(
                name_at,
                format!("unknown subspace '{name}' (expected vanish or hardy-inner)"),
            )),
        }
    }

    fn finish<T>(&mut self, value: T) -> std::result::Result<T, ParseError> {
        match self.peek() {
            None => Ok(value),
            Some(c) => Err(self.error(
                self.pos,
                format!("unexpected '{c}' after the specification"),
            )),
        }
    }
}

pub fn parse_kernel(input: &str) -> std::result::Result<KernelExpr, ParseError> {
    let mut p = Parser::new(input);
    let k = p.kernel()?;
    p.finish(k)
}

pub fn parse_subspace(input: &str) -> std::result::Result<SubspaceExpr, ParseError> {
    let mut p = Parser::new(input);
    let s = p.subspace()?;
    p.finish(s)
}

/// Parses and builds a kernel in one step.
pub fn kernel_from_spec(input: &str, base: &Path) -> Result<Kernel> {
    parse_kernel(input).map_err(CliError::from)?.build(base)
}
