//! Text form of finite group elements:
//!
//! ```text
//! lorentz:axis=3,u=0.3
//! galilean:u=0.3,0,0
//! rotation:axis=3,angle=0.5
//! translation:c=1,0,0
//! time:tau=0.5
//! ```

use wlc_core::worldline::GroupElement;

use crate::config::parse_floats;
use crate::CliError;

fn bad(text: &str, why: &str) -> CliError {
    CliError::Usage(format!("--element `{text}`: {why}"))
}

fn vector(text: &str, rest: &str, key: &str) -> Result<[f64; 3], CliError> {
    let body = rest
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| bad(text, &format!("expected `{key}=a,b,c`")))?;
    let v = parse_floats("element", body)?;
    v.try_into().map_err(|_| bad(text, "expected three components"))
}

/// `key=value` pairs separated by commas.
fn fields(text: &str, rest: &str, keys: &[&str]) -> Result<Vec<f64>, CliError> {
    let mut out = vec![None; keys.len()];
    for part in rest.split(',') {
        let (k, v) = part.split_once('=').ok_or_else(|| bad(text, "expected key=value"))?;
        let slot = keys
            .iter()
            .position(|x| *x == k.trim())
            .ok_or_else(|| bad(text, &format!("unknown key `{}`", k.trim())))?;
        out[slot] = Some(v.trim().parse::<f64>().map_err(|_| bad(text, &format!("`{}` is not a number", v.trim())))?);
    }
    keys.iter().zip(out).map(|(k, v)| v.ok_or_else(|| bad(text, &format!("missing `{k}`")))).collect()
}

fn axis(text: &str, a: f64) -> Result<usize, CliError> {
    match a {
        1.0 => Ok(1),
        2.0 => Ok(2),
        3.0 => Ok(3),
        _ => Err(bad(text, "axis must be 1, 2 or 3")),
    }
}

pub fn parse_element(text: &str) -> Result<GroupElement, CliError> {
    let (kind, rest) = text.split_once(':').ok_or_else(|| bad(text, "expected `kind:parameters`"))?;
    Ok(match kind.trim() {
        "lorentz" => {
            let f = fields(text, rest, &["axis", "u"])?;
            GroupElement::lorentz(axis(text, f[0])?, f[1])?
        }
        "galilean" => GroupElement::GalileanBoost(vector(text, rest, "u")?),
        "rotation" => {
            let f = fields(text, rest, &["axis", "angle"])?;
            let mut n = [0.0; 3];
            n[axis(text, f[0])? - 1] = 1.0;
            GroupElement::rotation_about(n, f[1])?
        }
        "translation" => GroupElement::SpaceTranslation(vector(text, rest, "c")?),
        "time" => GroupElement::TimeTranslation(fields(text, rest, &["tau"])?[0]),
        other => return Err(bad(text, &format!("unknown kind `{other}`"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds() {
        assert_eq!(parse_element("lorentz:axis=3,u=0.3").unwrap(), GroupElement::LorentzBoost { axis: 3, u: 0.3 });
        assert_eq!(parse_element("galilean:u=0.3,0,-1").unwrap(), GroupElement::GalileanBoost([0.3, 0.0, -1.0]));
        assert_eq!(parse_element("time:tau=2").unwrap(), GroupElement::TimeTranslation(2.0));
        assert!(matches!(parse_element("rotation:angle=0.5,axis=1").unwrap(), GroupElement::Rotation(_)));
    }

    #[test]
    fn rejects() {
        for t in
            ["lorentz:axis=4,u=0.1", "lorentz:u=0.1", "lorentz:axis=1,u=1.5", "galilean:u=1,2", "spin:x=1", "lorentz"]
        {
            assert!(parse_element(t).is_err(), "{t}");
        }
    }
}
