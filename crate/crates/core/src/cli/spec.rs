//! Text grammar for groups (`sym:4`, `quotient(angle(sym:4,2),pairs)`, ...)
//! and functions (`triv:3`, `dist(sym:4,2)`, ...).

use std::fs;

use super::CliError;
use crate::boolfn::{
    and_fn, collision, constant_fn, distinguishing_fn, for_compose_triv, forrelation_decision, simon_decision, triv,
    xor_fn, PartialFn, Theta,
};
use crate::oracles::{distinguishing_symmetry, LpSymmetry};
use crate::perm::{GroupAction, Permutation};
use crate::transforms::{
    bipartite_symmetry, bipartite_symmetry_unequal, digraph_symmetry, direct_product, distinct_tuples_action,
    graph_symmetry, hypergraph_symmetry, merge_actions, power_action, product_action, quotient_action,
    restrict_to_orbits, set_blocks, unordered_pair_blocks, EncodedAction,
};

/// Parsing context: caps and the files read along the way (for the input
/// digest).
#[derive(Clone, Debug)]
pub struct SpecContext {
    pub cap: usize,
    pub files: Vec<(String, Vec<u8>)>,
}

impl SpecContext {
    pub fn new(cap: usize) -> Self {
        SpecContext { cap, files: Vec::new() }
    }

    fn read(&mut self, path: &str) -> Result<String, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
        let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::Usage(format!("{path} is not UTF-8")))?;
        self.files.push((path.to_string(), bytes));
        Ok(text)
    }
}

/// Splits on commas outside parentheses.
pub fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

/// `name(args)` → `Some((name, args))`.
fn call(s: &str) -> Option<(&str, Vec<&str>)> {
    let open = s.find('(')?;
    if !s.ends_with(')') {
        return None;
    }
    Some((s[..open].trim(), split_top(&s[open + 1..s.len() - 1])))
}

fn num(s: &str, what: &str) -> Result<usize, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("expected an integer for {what}, found {s:?}")))
}

fn params<'a>(s: &'a str, name: &str, count: std::ops::RangeInclusive<usize>) -> Result<Vec<&'a str>, CliError> {
    let parts: Vec<&str> = s.split(':').skip(1).collect();
    if !count.contains(&parts.len()) {
        return Err(CliError::Usage(format!("{name} expects {count:?} parameters, found {s:?}")));
    }
    Ok(parts)
}

/// 1-indexed points separated by `.`, e.g. `1.2.5`.
pub fn parse_points(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(['.', ' '])
        .filter(|t| !t.is_empty())
        .map(|t| {
            let v = num(t, "point")?;
            if v == 0 {
                return Err(CliError::Usage("points are 1-indexed".into()));
            }
            Ok(v - 1)
        })
        .collect()
}

/// Blocks as `1.2|3.4`, or the keywords `pairs` / `sets` for the encoding of
/// the inner action.
fn parse_blocks(s: &str, inner: &EncodedAction) -> Result<Vec<Vec<usize>>, CliError> {
    match s {
        "pairs" => Ok(unordered_pair_blocks(&inner.encoding)?),
        "sets" => Ok(set_blocks(&inner.encoding)?),
        _ => s.split('|').map(parse_points).collect(),
    }
}

pub fn parse_group(s: &str, ctx: &mut SpecContext) -> Result<EncodedAction, CliError> {
    let s = s.trim();
    let cap = ctx.cap;
    if let Some((name, args)) = call(s) {
        let arg = |k: usize| -> Result<&str, CliError> {
            args.get(k)
                .copied()
                .ok_or_else(|| CliError::Usage(format!("{name}(...) is missing argument {}", k + 1)))
        };
        return match name {
            "power" => Ok(power_action(&parse_group(arg(0)?, ctx)?.action, num(arg(1)?, "ell")?, cap)?),
            "angle" => Ok(distinct_tuples_action(
                &parse_group(arg(0)?, ctx)?.action,
                num(arg(1)?, "ell")?,
                cap,
            )?),
            "quotient" => {
                let inner = parse_group(arg(0)?, ctx)?;
                let blocks = parse_blocks(arg(1)?, &inner)?;
                Ok(quotient_action(&inner.action, &blocks)?)
            }
            "restrict" => {
                let inner = parse_group(arg(0)?, ctx)?;
                Ok(restrict_to_orbits(&inner.action, &parse_points(arg(1)?)?)?)
            }
            "product" => {
                let a = parse_group(arg(0)?, ctx)?;
                let b = parse_group(arg(1)?, ctx)?;
                Ok(product_action(&a.action, &b.action, cap)?)
            }
            "dprod" => {
                let parts = args
                    .iter()
                    .map(|a| parse_group(a, ctx).map(|g| g.action))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(direct_product(&parts, cap)?)
            }
            "merge" => {
                let a = parse_group(arg(0)?, ctx)?;
                let b = parse_group(arg(1)?, ctx)?;
                Ok(EncodedAction::plain(merge_actions(&a.action, &b.action)?))
            }
            _ => Err(CliError::Usage(format!("unknown group constructor {name:?}"))),
        };
    }
    let head = s.split(':').next().unwrap_or("");
    let plain = |g: GroupAction| Ok(EncodedAction::plain(g));
    match head {
        "sym" => plain(GroupAction::symmetric(positive(params(s, head, 1..=1)?[0])?)),
        "cyc" => plain(GroupAction::cyclic(positive(params(s, head, 1..=1)?[0])?)),
        "alt" => plain(GroupAction::alternating(positive(params(s, head, 1..=1)?[0])?)),
        "id" => plain(GroupAction::trivial(positive(params(s, head, 1..=1)?[0])?)),
        "bitflip" => plain(GroupAction::bit_flip(num(params(s, head, 1..=1)?[0], "n")?)?),
        "bitperm" => plain(GroupAction::bit_permutation(num(params(s, head, 1..=1)?[0], "n")?)?),
        "graph" => Ok(graph_symmetry(num(params(s, head, 1..=1)?[0], "k")?, cap)?),
        "digraph" => Ok(digraph_symmetry(num(params(s, head, 1..=1)?[0], "k")?, cap)?),
        "hyper" => {
            let p = params(s, head, 2..=2)?;
            Ok(hypergraph_symmetry(num(p[0], "k")?, num(p[1], "p")?, cap)?)
        }
        "bipartite" => {
            let p = params(s, head, 1..=2)?;
            if p.len() == 1 {
                Ok(bipartite_symmetry(num(p[0], "k")?, cap)?)
            } else {
                Ok(bipartite_symmetry_unequal(num(p[0], "k1")?, num(p[1], "k2")?, cap)?)
            }
        }
        "file" => {
            let text = ctx.read(&s[5..])?;
            plain(GroupAction::from_json_str(&text)?)
        }
        _ => Err(CliError::Usage(format!("unknown group spec {s:?}"))),
    }
}

fn positive(s: &str) -> Result<usize, CliError> {
    let v = num(s, "n")?;
    if v == 0 {
        return Err(CliError::Usage("n must be positive".into()));
    }
    Ok(v)
}

/// Swapping the halves `x`, `y` and permuting index bits in both at once
/// keep the Forrelation sum; so does negating every bit (the symbol swap).
fn forrelation_group(n: usize) -> Result<GroupAction, CliError> {
    let mut gens = vec![Permutation::from_images((0..2 * n).map(|i| (i + n) % (2 * n)).collect())?];
    for p in GroupAction::bit_permutation(n)?.generators() {
        let img = p.images();
        gens.push(Permutation::from_images(
            (0..2 * n).map(|i| if i < n { img[i] } else { n + img[i - n] }).collect(),
        )?);
    }
    Ok(GroupAction::new(2 * n, gens)?)
}

/// A parsed function with the symmetry used to reduce its LPs.
pub struct FnSpec {
    pub f: PartialFn,
    pub symmetry: LpSymmetry,
    /// Position group claimed by the zoo for this function.
    pub group: GroupAction,
}

pub fn parse_fn(s: &str, ctx: &mut SpecContext) -> Result<FnSpec, CliError> {
    let s = s.trim();
    if let Some((name, args)) = call(s) {
        if name != "dist" || args.len() != 2 {
            return Err(CliError::Usage(format!("unknown function constructor {s:?}")));
        }
        let g = parse_group(args[0], ctx)?.action;
        let r = num(args[1], "r")?;
        let f = distinguishing_fn(&g, r)?.with_name(s);
        return Ok(FnSpec {
            f,
            symmetry: distinguishing_symmetry(&g),
            group: g,
        });
    }
    let head = s.split(':').next().unwrap_or("");
    match head {
        "triv" => {
            let m = positive(params(s, head, 1..=1)?[0])?;
            let g = GroupAction::symmetric(m);
            Ok(FnSpec {
                f: triv(m)?.with_name(s),
                symmetry: LpSymmetry::positions_only(g.clone(), 2),
                group: g,
            })
        }
        "collision" => {
            let p = params(s, head, 1..=2)?;
            let n = positive(p[0])?;
            let r = if p.len() == 2 { num(p[1], "r")? } else { n / 2 };
            let g = GroupAction::symmetric(n);
            Ok(FnSpec {
                f: collision(n, r)?.with_name(s),
                symmetry: LpSymmetry {
                    positions: g.clone(),
                    symbols: g.clone(),
                },
                group: g,
            })
        }
        "simon" => {
            let n = num(params(s, head, 1..=1)?[0], "n")?;
            let g = GroupAction::bit_flip(n)?;
            Ok(FnSpec {
                f: simon_decision(n)?.with_name(s),
                symmetry: LpSymmetry {
                    positions: g.clone(),
                    symbols: GroupAction::symmetric(n),
                },
                group: g,
            })
        }
        "forr" => {
            let n = num(params(s, head, 1..=1)?[0], "n")?;
            let f = forrelation_decision(n, Theta::default())?.with_name(s);
            let g = forrelation_group(n)?;
            Ok(FnSpec {
                f,
                symmetry: LpSymmetry {
                    positions: g.clone(),
                    symbols: GroupAction::symmetric(2),
                },
                group: g,
            })
        }
        "fortriv" => {
            let n = num(params(s, head, 1..=1)?[0], "n")?;
            let f = for_compose_triv(n)?.with_name(s);
            let k = (n as f64).sqrt().round() as usize;
            let g = direct_product(&vec![GroupAction::symmetric(k); k], ctx.cap)?.action;
            Ok(FnSpec {
                f,
                symmetry: LpSymmetry::positions_only(g.clone(), 2),
                group: g,
            })
        }
        "xor" | "and" => {
            let n = positive(params(s, head, 1..=1)?[0])?;
            let f = if head == "xor" { xor_fn(n)? } else { and_fn(n)? };
            let g = GroupAction::symmetric(n);
            Ok(FnSpec {
                f: f.with_name(s),
                symmetry: LpSymmetry::positions_only(g.clone(), 2),
                group: g,
            })
        }
        "const" => {
            let p = params(s, head, 3..=3)?;
            let (n, m) = (positive(p[0])?, positive(p[1])?);
            let v = match p[2] {
                "0" => false,
                "1" => true,
                other => return Err(CliError::Usage(format!("constant value must be 0 or 1, found {other:?}"))),
            };
            let g = GroupAction::symmetric(n);
            Ok(FnSpec {
                f: constant_fn(n, m, v)?.with_name(s),
                symmetry: LpSymmetry {
                    positions: g.clone(),
                    symbols: GroupAction::symmetric(m),
                },
                group: g,
            })
        }
        "file" => {
            let text = ctx.read(&s[5..])?;
            let f = PartialFn::from_json_str(&text)?;
            let (n, m) = (f.n(), f.m());
            Ok(FnSpec {
                f,
                symmetry: LpSymmetry::trivial(n, m),
                group: GroupAction::trivial(n),
            })
        }
        _ => Err(CliError::Usage(format!("unknown function spec {s:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigUint;

    fn g(s: &str) -> EncodedAction {
        parse_group(s, &mut SpecContext::new(100_000)).unwrap()
    }

    #[test]
    fn group_grammar() {
        assert_eq!(g("sym:4").action.order(), BigUint::from(24u32));
        assert_eq!(g("graph:4").degree(), 6);
        assert_eq!(g("quotient(angle(sym:4,2),pairs)").degree(), 6);
        assert_eq!(g("hyper:5:3").degree(), 10);
        assert_eq!(g("bipartite:2:3").action.order(), BigUint::from(12u32));
        assert_eq!(g("power(sym:3,2)").degree(), 9);
        assert_eq!(g("restrict(power(sym:3,2),2.3.4.6.7.8)").degree(), 6);
        assert_eq!(g("merge(bitflip:8,bitperm:8)").action.order(), BigUint::from(48u32));
        assert_eq!(g("dprod(sym:2,sym:3)").action.order(), BigUint::from(12u32));
        assert_eq!(g("product(sym:2,cyc:3)").degree(), 6);
        assert_eq!(g("quotient(cyc:4,1.3|2.4)").degree(), 2);
        let mut ctx = SpecContext::new(100_000);
        for bad in ["sym", "sym:x", "nope:3", "power(sym:3)", "quotient(sym:4,1.2|3)"] {
            assert!(parse_group(bad, &mut ctx).is_err(), "{bad}");
        }
    }

    #[test]
    fn function_grammar() {
        let mut ctx = SpecContext::new(100_000);
        assert_eq!(parse_fn("triv:3", &mut ctx).unwrap().f.domain().unwrap().len(), 2);
        assert_eq!(parse_fn("dist(sym:3,1)", &mut ctx).unwrap().f.domain().unwrap().len(), 9);
        assert_eq!(parse_fn("collision:4", &mut ctx).unwrap().f.n(), 4);
        assert_eq!(parse_fn("fortriv:16", &mut ctx).unwrap().group.degree(), 16);
        assert!(parse_fn("dist(sym:3)", &mut ctx).is_err());
        assert!(parse_fn("const:2:2:5", &mut ctx).is_err());
    }
}
