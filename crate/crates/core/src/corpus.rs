//! Built-in ring definitions.

use crate::error::{Error, Result};
use crate::parse::{parse_ring, RingDefinition};

const CASE66: &str = "\
label case66
field Q
vars x,y,z,u
ideal:
x*z
y^2
y*u
z^2
z*u
u^2
";

const CASE54: &str = "\
label case54
field Q
vars x,y,z,u
ideal:
x^2
x*z
y^2
z^2
y*u + z*u
u^2
";

const CASE55: &str = "\
label case55
field Q
vars x,y,z,u
ideal:
x^2 + x*y
x*z + y*u
x*u
y^2
z^2
z*u + u^2
";

const CASE71V16: &str = "\
label case71v16
field Q
vars x,y,z,u
ideal:
x^2
y^2 + z^2
x*y
y*z
z*u
x*z + u^2
x*u
";

const SOCLE4: &str = "\
label socle4
field Q
vars a,b,c,d
order lex
ideal:
a^3
a^2*c
a^2*d
a*c^2
b^3
b^2*c
b^2*d
b*c^2
b*d^2
c^2*d
a*b^2 + c*d^2
a*b*d - c^3
b*c*d + d^3
";

// stretched, v = 3, r = 2, h = 3, a = (1)
const STRETCHED323: &str = "\
label stretched323
field Q
vars t,z,w
ideal:
w^2
z*w
t*w
t*z
t^3 - z^2
";

// stretched, v = 2, r = 2, h = 3
const STRETCHED223: &str = "\
label stretched223
field Q
vars t,w
ideal:
w^2
t*w
t^4
";

const ENTRIES: &[(&str, &str, &str)] = &[
    ("case66", CASE66, "monomial quadrics; nonlinear strand generated by one linear cycle"),
    ("case54", CASE54, "quadrics with m^3 = 0; trivial-product cycle set generates the nonlinear strands"),
    ("case55", CASE55, "quadrics; H generated in the linear strand but k has a nonlinear resolution"),
    ("case71v16", CASE71V16, "quadrics with m^3 = 0; a linear-strand class with nonzero square"),
    ("socle4", SOCLE4, "cubics in four variables with a two-dimensional socle in degree 4"),
    ("stretched323", STRETCHED323, "stretched ring with v = 3, r = 2, h = 3"),
    ("stretched223", STRETCHED223, "stretched ring with v = 2, r = 2, h = 3"),
];

/// Names and one-line descriptions of the built-in rings.
pub fn list() -> Vec<(&'static str, &'static str)> {
    ENTRIES.iter().map(|(n, _, d)| (*n, *d)).collect()
}

/// Source text of a built-in ring.
pub fn text(name: &str) -> Result<&'static str> {
    ENTRIES.iter().find(|e| e.0 == name).map(|e| e.1).ok_or_else(|| Error::UnknownRing(name.to_string()))
}

pub fn get(name: &str) -> Result<RingDefinition> {
    parse_ring(text(name)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_parses_and_round_trips() {
        for (name, _) in list() {
            let def = get(name).unwrap();
            assert_eq!(def.label.as_deref(), Some(name));
            assert_eq!(parse_ring(&def.print()).unwrap(), def);
            def.build().unwrap();
        }
        assert!(matches!(get("case99"), Err(Error::UnknownRing(_))));
    }
}
