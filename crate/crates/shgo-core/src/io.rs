//! Molecule and basis-set ingestion.
//!
//! Internally every length is in bohr; unit conversion happens exactly once,
//! at parse time. The molecule format is plain XYZ — an atom count, a
//! comment line that may carry `units=angstrom|bohr` (default: angstrom, the
//! XYZ convention), then `Symbol x y z` per atom. The basis format is a
//! minimal line-oriented text: an element symbol on its own line opens a
//! block; each shell is `L n_prim` (spectroscopic letter s p d f g h i or an
//! integer) followed by `n_prim` lines of `exponent coefficient`. Blank
//! lines and `#` comments are ignored everywhere.

use crate::engine::{Center, Shell};
use crate::error::{Error, Result};

/// CODATA conversion constant: one bohr in ångström.
pub const ANGSTROM_PER_BOHR: f64 = 0.52917721092;

/// Highest angular momentum the engine tabulates.
pub use crate::angular::L_MAX;

/// Element symbols in atomic-number order, H (1) through Kr (36).
const SYMBOLS: [&str; 36] = [
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg", "Al", "Si", "P", "S", "Cl",
    "Ar", "K", "Ca", "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As",
    "Se", "Br", "Kr",
];

/// Atomic number for a (case-sensitive) element symbol.
pub fn atomic_number(symbol: &str) -> Option<u32> {
    SYMBOLS
        .iter()
        .position(|&s| s == symbol)
        .map(|i| i as u32 + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Units {
    Bohr,
    Angstrom,
}

/// One atom: symbol, atomic number, position in bohr.
#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub symbol: String,
    pub atomic_number: u32,
    pub position: [f64; 3],
}

/// A parsed molecule. Positions are always bohr; `units` records what the
/// input declared.
#[derive(Clone, Debug, PartialEq)]
pub struct Molecule {
    pub atoms: Vec<Atom>,
    pub units: Units,
}

impl Molecule {
    /// The nuclei as point charges (atomic numbers).
    pub fn nuclei(&self) -> Vec<Center> {
        self.atoms
            .iter()
            .map(|a| Center {
                position: a.position,
                charge: a.atomic_number as f64,
            })
            .collect()
    }
}

/// One shell definition of a basis set: angular momentum and primitive
/// (exponent, contraction coefficient) pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisShellDef {
    pub l: usize,
    pub primitives: Vec<(f64, f64)>,
}

/// A basis set: per-element shell definitions, in input order (no hash
/// ordering anywhere, so shell construction is a pure function of the
/// input).
#[derive(Clone, Debug, PartialEq, Default)]
pub struct BasisSet {
    pub elements: Vec<(String, Vec<BasisShellDef>)>,
}

impl BasisSet {
    pub fn shells_for(&self, symbol: &str) -> Option<&[BasisShellDef]> {
        self.elements
            .iter()
            .find(|(s, _)| s == symbol)
            .map(|(_, defs)| defs.as_slice())
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses XYZ text into a [`Molecule`] (positions converted to bohr).
pub fn parse_molecule(text: &str) -> Result<Molecule> {
    let mut lines = text.lines().enumerate();
    let (_, count_line) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty molecule file"))?;
    let count: usize = count_line.trim().parse().map_err(|_| {
        parse_err(
            1,
            format!("expected an atom count, found '{}'", count_line.trim()),
        )
    })?;
    let (_, comment) = lines
        .next()
        .ok_or_else(|| parse_err(2, "missing comment line"))?;
    let mut units = Units::Angstrom;
    for token in comment.split_whitespace() {
        if let Some(value) = token.strip_prefix("units=") {
            units = match value {
                "bohr" => Units::Bohr,
                "angstrom" => Units::Angstrom,
                other => {
                    return Err(parse_err(2, format!("unknown units '{other}'")));
                }
            };
        }
    }
    let scale = match units {
        Units::Bohr => 1.0,
        Units::Angstrom => 1.0 / ANGSTROM_PER_BOHR,
    };
    let mut atoms = Vec::with_capacity(count);
    for (idx, raw) in lines {
        let lineno = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        if atoms.len() == count {
            return Err(parse_err(
                lineno,
                format!("more than the declared {count} atoms"),
            ));
        }
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(parse_err(
                lineno,
                format!("expected 'Symbol x y z', found {} fields", fields.len()),
            ));
        }
        let symbol = fields[0].to_string();
        let atomic_number =
            atomic_number(&symbol).ok_or_else(|| Error::UnknownElement(symbol.clone()))?;
        let mut position = [0.0; 3];
        for (k, f) in fields[1..].iter().enumerate() {
            let v: f64 = f
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad coordinate '{f}'")))?;
            if !v.is_finite() {
                return Err(parse_err(lineno, format!("non-finite coordinate '{f}'")));
            }
            position[k] = v * scale;
        }
        atoms.push(Atom {
            symbol,
            atomic_number,
            position,
        });
    }
    if atoms.len() != count {
        return Err(parse_err(
            text.lines().count(),
            format!("declared {count} atoms, found {}", atoms.len()),
        ));
    }
    Ok(Molecule { atoms, units })
}

/// Prints a molecule in the exact format [`parse_molecule`] accepts, in
/// bohr, with full-precision coordinates so a reparse is structurally
/// identical.
pub fn print_molecule(mol: &Molecule) -> String {
    let mut out = format!("{}\nunits=bohr\n", mol.atoms.len());
    for a in &mol.atoms {
        out.push_str(&format!(
            "{} {:.16e} {:.16e} {:.16e}\n",
            a.symbol, a.position[0], a.position[1], a.position[2]
        ));
    }
    out
}

fn parse_l(token: &str, lineno: usize) -> Result<usize> {
    let l = match token {
        "s" | "S" => 0,
        "p" | "P" => 1,
        "d" | "D" => 2,
        "f" | "F" => 3,
        "g" | "G" => 4,
        "h" | "H" => 5,
        "i" | "I" => 6,
        other => other
            .parse::<usize>()
            .map_err(|_| parse_err(lineno, format!("bad angular momentum '{other}'")))?,
    };
    if l > L_MAX {
        return Err(Error::AngularMomentumTooHigh(l, L_MAX));
    }
    Ok(l)
}

/// Parses basis text into a [`BasisSet`].
pub fn parse_basis(text: &str) -> Result<BasisSet> {
    let mut basis = BasisSet::default();
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .peekable();
    while let Some((lineno, raw)) = lines.next() {
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.len() != 1 {
            return Err(parse_err(
                lineno,
                format!("expected an element symbol, found '{}'", raw.trim()),
            ));
        }
        let symbol = fields[0].to_string();
        if atomic_number(&symbol).is_none() {
            return Err(Error::UnknownElement(symbol));
        }
        let mut shells = Vec::new();
        while let Some(&(shell_lineno, shell_raw)) = lines.peek() {
            let sf: Vec<&str> = shell_raw.split_whitespace().collect();
            if sf.len() != 2 {
                break; // next element block
            }
            lines.next();
            let l = parse_l(sf[0], shell_lineno)?;
            let n_prim: usize = sf[1]
                .parse()
                .map_err(|_| parse_err(shell_lineno, format!("bad primitive count '{}'", sf[1])))?;
            if n_prim == 0 {
                return Err(parse_err(
                    shell_lineno,
                    "a shell needs at least one primitive",
                ));
            }
            let mut primitives = Vec::with_capacity(n_prim);
            for _ in 0..n_prim {
                let (plineno, praw) = lines.next().ok_or_else(|| {
                    parse_err(
                        shell_lineno,
                        format!("shell promises {n_prim} primitives, file ended"),
                    )
                })?;
                let pf: Vec<&str> = praw.split_whitespace().collect();
                if pf.len() != 2 {
                    return Err(parse_err(
                        plineno,
                        format!("expected 'exponent coefficient', found '{}'", praw.trim()),
                    ));
                }
                let exponent: f64 = pf[0]
                    .parse()
                    .map_err(|_| parse_err(plineno, format!("bad exponent '{}'", pf[0])))?;
                let coefficient: f64 = pf[1]
                    .parse()
                    .map_err(|_| parse_err(plineno, format!("bad coefficient '{}'", pf[1])))?;
                if !(exponent > 0.0) || !exponent.is_finite() {
                    return Err(parse_err(
                        plineno,
                        format!("exponent must be positive and finite, got {exponent}"),
                    ));
                }
                if !coefficient.is_finite() {
                    return Err(parse_err(plineno, "non-finite contraction coefficient"));
                }
                primitives.push((exponent, coefficient));
            }
            shells.push(BasisShellDef { l, primitives });
        }
        if let Some(slot) = basis.elements.iter_mut().find(|(s, _)| *s == symbol) {
            log::warn!("basis defines element {symbol} twice; keeping the later block");
            slot.1 = shells;
        } else {
            basis.elements.push((symbol, shells));
        }
    }
    Ok(basis)
}

/// Prints a basis set in the exact format [`parse_basis`] accepts.
pub fn print_basis(basis: &BasisSet) -> String {
    let mut out = String::new();
    for (symbol, shells) in &basis.elements {
        out.push_str(symbol);
        out.push('\n');
        for def in shells {
            out.push_str(&format!("{} {}\n", def.l, def.primitives.len()));
            for &(e, c) in &def.primitives {
                out.push_str(&format!("{:.16e} {:.16e}\n", e, c));
            }
        }
    }
    out
}

/// Builds the normalized shell list: atom-major, then the element's shells
/// in input order.
pub fn build_shells(mol: &Molecule, basis: &BasisSet) -> Result<Vec<Shell>> {
    let mut shells = Vec::new();
    for atom in &mol.atoms {
        let defs = basis
            .shells_for(&atom.symbol)
            .ok_or_else(|| Error::MissingBasisElement(atom.symbol.clone()))?;
        for def in defs {
            shells.push(Shell::contracted(def.l, atom.position, &def.primitives));
        }
    }
    Ok(shells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{overlap_block, EngineOptions};

    #[test]
    fn minimal_molecule() {
        let m = parse_molecule("1\n\nH 0 0 0\n").unwrap();
        assert_eq!(m.atoms.len(), 1);
        assert_eq!(m.atoms[0].atomic_number, 1);
        assert_eq!(m.atoms[0].position, [0.0; 3]);
        assert_eq!(m.units, Units::Angstrom);
    }

    #[test]
    fn angstrom_conversion() {
        let m = parse_molecule("1\nunits=angstrom comment text\nH 0 0 0.52917721092\n").unwrap();
        assert!((m.atoms[0].position[2] - 1.0).abs() < 1e-12);
        let mb = parse_molecule("1\nunits=bohr\nH 0 0 1.0\n").unwrap();
        assert_eq!(mb.atoms[0].position[2], 1.0);
    }

    #[test]
    fn molecule_errors_carry_line_numbers() {
        match parse_molecule("2\n\nH 0 0 0\n") {
            Err(Error::Parse { msg, .. }) => assert!(msg.contains("declared 2")),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_molecule("1\n\nH 0 0\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_molecule("1\n\nXx 0 0 0\n") {
            Err(Error::UnknownElement(s)) => assert_eq!(s, "Xx"),
            other => panic!("expected unknown element, got {other:?}"),
        }
        match parse_molecule("1\n\nH 0 zero 0\n") {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 3);
                assert!(msg.contains("zero"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn molecule_round_trip() {
        let m = parse_molecule("2\nunits=bohr\nO 0.1 -0.2 0.3\nH 1.0 2.0 -3.0\n").unwrap();
        let again = parse_molecule(&print_molecule(&m)).unwrap();
        assert_eq!(m, again);
    }

    const TOY_BASIS: &str = "\
# toy basis
H
s 2
1.3 0.6
0.3 0.5
O
s 1
5.0 1.0
p 1
1.2 1.0
d 1
0.8 1.0
";

    #[test]
    fn basis_parses_letters_and_layout() {
        let b = parse_basis(TOY_BASIS).unwrap();
        assert_eq!(b.elements.len(), 2);
        let h = b.shells_for("H").unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].l, 0);
        assert_eq!(h[0].primitives.len(), 2);
        let o = b.shells_for("O").unwrap();
        assert_eq!(o.iter().map(|d| d.l).collect::<Vec<_>>(), vec![0, 1, 2]);
        // letters h and i map to l = 5 and 6
        let hb = parse_basis("H\nh 1\n1.0 1.0\ni 1\n1.0 1.0\n").unwrap();
        let defs = hb.shells_for("H").unwrap();
        assert_eq!(defs[0].l, 5);
        assert_eq!(defs[1].l, 6);
    }

    #[test]
    fn basis_rejects_bad_input() {
        assert!(matches!(
            parse_basis("H\ns 1\n-1.0 1.0\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_basis("H\n99 1\n1.0 1.0\n"),
            Err(Error::AngularMomentumTooHigh(99, _))
        ));
        assert!(matches!(
            parse_basis("Zz\ns 1\n1.0 1.0\n"),
            Err(Error::UnknownElement(_))
        ));
        // promised two primitives, gave one
        assert!(matches!(
            parse_basis("H\ns 2\n1.0 1.0\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn duplicate_element_last_wins() {
        let b = parse_basis("H\ns 1\n1.0 1.0\nH\np 1\n0.5 1.0\n").unwrap();
        assert_eq!(b.elements.len(), 1);
        let defs = b.shells_for("H").unwrap();
        assert_eq!(defs.len(), 1);
        assert_eq!(defs[0].l, 1);
    }

    #[test]
    fn basis_round_trip() {
        let b = parse_basis(TOY_BASIS).unwrap();
        let again = parse_basis(&print_basis(&b)).unwrap();
        assert_eq!(b, again);
    }

    #[test]
    fn build_shells_orders_and_normalizes() {
        let m = parse_molecule("2\nunits=bohr\nO 0 0 0\nH 0 0 1.8\n").unwrap();
        let b = parse_basis(TOY_BASIS).unwrap();
        let shells = build_shells(&m, &b).unwrap();
        // atom-major: O's s,p,d then H's s
        assert_eq!(
            shells.iter().map(|s| s.l).collect::<Vec<_>>(),
            vec![0, 1, 2, 0]
        );
        assert_eq!(shells[3].center, [0.0, 0.0, 1.8]);
        let opts = EngineOptions::default();
        for s in &shells {
            let block = overlap_block(s, s, &opts);
            for (i, row) in block.iter().enumerate() {
                assert!((row[i] - 1.0).abs() < 1e-14);
            }
        }
        // missing element
        let m2 = parse_molecule("1\nunits=bohr\nHe 0 0 0\n").unwrap();
        match build_shells(&m2, &b) {
            Err(Error::MissingBasisElement(s)) => assert_eq!(s, "He"),
            other => panic!("expected missing element, got {other:?}"),
        }
    }
}
