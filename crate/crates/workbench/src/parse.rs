//! Text forms accepted by the CLI and the HTTP service.

use atoric::exactmath::num::{parse_rat, Int, Rat};
use atoric::hjchain::MarkedChain;
use atoric::wedge::{from_chain, validate, WedgeParams};

/// Parses `p1,q1,p2,q2,c,a`, optionally wrapped as `Π(...)` or `(...)`.
pub fn parse_wedge(s: &str) -> Result<WedgeParams, String> {
    let t = s.trim();
    let t = t.strip_prefix("Π").or_else(|| t.strip_prefix("Pi")).unwrap_or(t).trim();
    let t = t.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(t);
    let parts: Vec<&str> = t.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(format!("expected p1,q1,p2,q2,c,a; got {s:?}"));
    }
    let ints: Vec<Int> = parts[..5]
        .iter()
        .map(|x| x.parse::<Int>().map_err(|_| format!("not an integer: {x:?}")))
        .collect::<Result<_, _>>()?;
    let a = parse_rational(parts[5])?;
    let [p1, q1, p2, q2, c]: [Int; 5] = ints.try_into().expect("five integers");
    validate(p1, q1, p2, q2, c, a).map_err(|e| e.to_string())
}

pub fn parse_rational(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| format!("{s:?}: {e}"))
}

/// Builds the wedge of a marked chain such as `[4]-3-[]` with edge length `a`.
pub fn wedge_from_chain(chain: &str, a: &Rat) -> Result<WedgeParams, String> {
    let mc = MarkedChain::parse(chain).map_err(|e| e.to_string())?;
    from_chain(&mc, a.clone()).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use atoric::exactmath::num::rat;

    #[test]
    fn wedge_forms() {
        let w = WedgeParams::new(1, 0, 5, 3, 1, rat(1, 10));
        assert_eq!(parse_wedge("1,0,5,3,1,1/10").unwrap(), w);
        assert_eq!(parse_wedge("Π(1, 0, 5, 3, 1, 1/10)").unwrap(), w);
        assert_eq!(parse_wedge(&w.to_string()).unwrap(), w);
        assert!(parse_wedge("1,0,5,3,1").is_err());
        assert!(parse_wedge("2,2,5,3,1,1").is_err());
        assert_eq!(wedge_from_chain("[4]-3-[]", &rat(3, 2)).unwrap(), WedgeParams::new(2, 1, 1, 1, 3, rat(3, 2)));
    }
}
