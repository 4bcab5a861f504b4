//! The `.scx` text format: one maximal simplex per line, an optional action
//! block and optional orientation lines.
//!
//! ```text
//! # octahedron with a quarter turn
//! dim 2
//! vertices a b c d n s
//! a b n
//! ...
//! group cyclic 4
//! gen 1: a->b b->c c->d d->a
//! orient a b n
//! ```
//!
//! `group table g0 g1 ...` is followed by one `mul <g>: <g*g0> <g*g1> ...`
//! line per element. Vertices not named in a `gen` line are fixed. An
//! `orient` line lists a top simplex in positive order; it fixes the sign of
//! the fundamental class on that simplex's component.

use std::fmt::Write as _;

use ihsig_core::action::{FiniteGroup, GroupAction};
use ihsig_core::complex::{fundamental_class, simplex, Simplex};
use ihsig_core::{Error as CoreError, Orientation, SimplicialComplex};
use thiserror::Error;

#[derive(Debug, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

/// A parsed file. `orientation` is present when the file has `orient` lines.
#[derive(Debug, Clone)]
pub struct ScxFile {
    pub complex: SimplicialComplex,
    pub action: Option<GroupAction>,
    pub orientation: Option<Orientation>,
}

enum GroupSpec {
    Cyclic(usize),
    Table(Vec<String>, Vec<(usize, Vec<String>)>),
}

fn valid_label(l: &str) -> bool {
    !l.is_empty() && !l.contains("->") && !l.contains(':') && !l.contains('#')
}

pub fn parse(text: &str) -> Result<ScxFile, ParseError> {
    let mut dim: Option<(usize, usize)> = None;
    let mut vertices: Option<(usize, Vec<String>)> = None;
    let mut facets: Vec<(usize, Vec<String>)> = Vec::new();
    let mut group: Option<(usize, GroupSpec)> = None;
    let mut gens: Vec<(usize, String, Vec<(String, String)>)> = Vec::new();
    let mut orients: Vec<(usize, Vec<String>)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let head = words.next().unwrap_or_default();
        match head {
            "dim" => {
                let n = words.next().and_then(|w| w.parse().ok()).ok_or_else(|| err(ln, "expected `dim <n>`"))?;
                if words.next().is_some() {
                    return Err(err(ln, "trailing input after `dim <n>`"));
                }
                dim = Some((ln, n));
            }
            "vertices" => {
                if vertices.is_some() {
                    return Err(err(ln, "repeated `vertices` line"));
                }
                vertices = Some((ln, words.map(String::from).collect()));
            }
            "group" => {
                if group.is_some() {
                    return Err(err(ln, "repeated `group` line"));
                }
                let spec = match words.next() {
                    Some("cyclic") => {
                        let k: usize = words
                            .next()
                            .and_then(|w| w.parse().ok())
                            .filter(|&k| k > 0)
                            .ok_or_else(|| err(ln, "expected `group cyclic <k>` with k ≥ 1"))?;
                        GroupSpec::Cyclic(k)
                    }
                    Some("table") => {
                        let labels: Vec<String> = words.map(String::from).collect();
                        if labels.is_empty() {
                            return Err(err(ln, "`group table` needs element labels"));
                        }
                        GroupSpec::Table(labels, Vec::new())
                    }
                    _ => return Err(err(ln, "expected `group cyclic <k>` or `group table <labels>`")),
                };
                group = Some((ln, spec));
            }
            "mul" => {
                let Some((_, GroupSpec::Table(_, rows))) = group.as_mut() else {
                    return Err(err(ln, "`mul` line outside a `group table` block"));
                };
                let rest = line["mul".len()..].trim();
                let (g, products) = rest.split_once(':').ok_or_else(|| err(ln, "expected `mul <g>: <products>`"))?;
                let g = g.trim().to_string();
                rows.push((ln, std::iter::once(g).chain(products.split_whitespace().map(String::from)).collect()));
            }
            "gen" => {
                let rest = line["gen".len()..].trim();
                let (g, maps) = rest.split_once(':').ok_or_else(|| err(ln, "expected `gen <element>: v->w ...`"))?;
                let mut pairs = Vec::new();
                for m in maps.split_whitespace() {
                    let (v, w) = m.split_once("->").ok_or_else(|| err(ln, format!("expected `v->w`, found {m:?}")))?;
                    pairs.push((v.to_string(), w.to_string()));
                }
                gens.push((ln, g.trim().to_string(), pairs));
            }
            "orient" => orients.push((ln, words.map(String::from).collect())),
            _ => {
                if group.is_some() {
                    return Err(err(ln, format!("unexpected {head:?} inside the action block")));
                }
                facets.push((ln, line.split_whitespace().map(String::from).collect()));
            }
        }
    }

    if facets.is_empty() {
        return Err(err(text.lines().count().max(1), "no simplices"));
    }
    let complex = build_complex(vertices, &facets)?;
    if let Some((ln, n)) = dim {
        if complex.dim() != n {
            return Err(err(ln, format!("header says dimension {n}, simplices have dimension {}", complex.dim())));
        }
    }
    let action = match group {
        Some((ln, spec)) => Some(build_action(&complex, ln, spec, &gens)?),
        None => {
            if let Some((ln, ..)) = gens.first() {
                return Err(err(*ln, "`gen` line without a `group` line"));
            }
            None
        }
    };
    let orientation = if orients.is_empty() { None } else { Some(build_orientation(&complex, &orients)?) };
    Ok(ScxFile { complex, action, orientation })
}

fn build_complex(
    vertices: Option<(usize, Vec<String>)>,
    facets: &[(usize, Vec<String>)],
) -> Result<SimplicialComplex, ParseError> {
    let (vline, mut labels) = vertices.unwrap_or((0, Vec::new()));
    let declared = !labels.is_empty();
    for l in &labels {
        if !valid_label(l) {
            return Err(err(vline, format!("invalid vertex label {l:?}")));
        }
    }
    let mut index: std::collections::HashMap<String, u32> = std::collections::HashMap::new();
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i as u32).is_some() {
            return Err(err(vline, format!("duplicate vertex label {l:?}")));
        }
    }
    let mut simplices = Vec::with_capacity(facets.len());
    for (ln, f) in facets {
        let mut ids = Vec::with_capacity(f.len());
        for l in f {
            if !valid_label(l) {
                return Err(err(*ln, format!("invalid vertex label {l:?}")));
            }
            let id = match index.get(l) {
                Some(&id) => id,
                None if declared => return Err(err(*ln, format!("vertex {l:?} is not listed in `vertices`"))),
                None => {
                    labels.push(l.clone());
                    index.insert(l.clone(), labels.len() as u32 - 1);
                    labels.len() as u32 - 1
                }
            };
            if ids.contains(&id) {
                return Err(err(*ln, format!("vertex {l:?} repeated in a simplex")));
            }
            ids.push(id);
        }
        simplices.push(simplex(ids));
    }
    SimplicialComplex::new(labels, simplices).map_err(|e| err(facets[0].0, e.to_string()))
}

fn build_group(line: usize, spec: GroupSpec) -> Result<FiniteGroup, ParseError> {
    match spec {
        GroupSpec::Cyclic(k) => Ok(FiniteGroup::cyclic(k)),
        GroupSpec::Table(labels, rows) => {
            let n = labels.len();
            let pos = |l: &str, ln: usize| {
                labels.iter().position(|x| x == l).ok_or_else(|| err(ln, format!("unknown group element {l:?}")))
            };
            let mut mult = vec![None; n];
            for (ln, row) in &rows {
                let g = pos(&row[0], *ln)?;
                if row.len() != n + 1 {
                    return Err(err(*ln, format!("expected {n} products, found {}", row.len() - 1)));
                }
                if mult[g].is_some() {
                    return Err(err(*ln, format!("repeated row for {:?}", row[0])));
                }
                mult[g] = Some(row[1..].iter().map(|x| pos(x, *ln).map(|p| p as u32)).collect::<Result<Vec<_>, _>>()?);
            }
            let mult: Vec<Vec<u32>> = mult
                .into_iter()
                .enumerate()
                .map(|(g, r)| r.ok_or_else(|| err(line, format!("missing `mul` row for {:?}", labels[g]))))
                .collect::<Result<_, _>>()?;
            FiniteGroup::from_table(labels, mult).map_err(|e| err(line, e.to_string()))
        }
    }
}

fn build_action(
    k: &SimplicialComplex,
    line: usize,
    spec: GroupSpec,
    gens: &[(usize, String, Vec<(String, String)>)],
) -> Result<GroupAction, ParseError> {
    let group = build_group(line, spec)?;
    let nv = k.num_vertices();
    let mut generators = Vec::with_capacity(gens.len());
    for (ln, g, pairs) in gens {
        let g = group.element(g).map_err(|e| err(*ln, e.to_string()))?;
        let mut perm: Vec<u32> = (0..nv as u32).collect();
        let mut seen = vec![false; nv];
        for (v, w) in pairs {
            let v = k.vertex_by_label(v).ok_or_else(|| err(*ln, format!("unknown vertex {v:?}")))?;
            let w = k.vertex_by_label(w).ok_or_else(|| err(*ln, format!("unknown vertex {w:?}")))?;
            if std::mem::replace(&mut seen[v as usize], true) {
                return Err(err(*ln, format!("vertex {:?} mapped twice", k.label(v))));
            }
            perm[v as usize] = w;
        }
        let mut hit = vec![false; nv];
        for &w in &perm {
            if std::mem::replace(&mut hit[w as usize], true) {
                return Err(err(*ln, format!("not a permutation: {:?} is hit twice", k.label(w))));
            }
        }
        for f in k.facets() {
            let image = simplex(f.iter().map(|&v| perm[v as usize]));
            if !k.contains(&image) {
                let e = CoreError::NotSimplicialAction(format!(
                    "{:?} maps {:?} to {:?}",
                    group.label(g),
                    k.labels_of(&f),
                    k.labels_of(&image)
                ));
                return Err(err(*ln, e.to_string()));
            }
        }
        generators.push((g, perm));
    }
    GroupAction::validate(group, k.clone(), &generators).map_err(|e| err(line, e.to_string()))
}

fn build_orientation(k: &SimplicialComplex, orients: &[(usize, Vec<String>)]) -> Result<Orientation, ParseError> {
    let n = k.dim();
    let base = fundamental_class(k).map_err(|e| err(orients[0].0, e.to_string()))?;
    let components = k.components();
    let mut component_of = vec![0usize; k.num_vertices()];
    for (c, vs) in components.iter().enumerate() {
        for &v in vs {
            component_of[v as usize] = c;
        }
    }
    let mut flip: Vec<Option<bool>> = vec![None; components.len()];
    for (ln, tuple) in orients {
        let ids: Vec<u32> = tuple
            .iter()
            .map(|l| k.vertex_by_label(l).ok_or_else(|| err(*ln, format!("unknown vertex {l:?}"))))
            .collect::<Result<_, _>>()?;
        if ids.len() != n + 1 {
            return Err(err(*ln, format!("`orient` needs a top simplex of {} vertices", n + 1)));
        }
        let s = simplex(ids.iter().copied());
        let top = k
            .index_of(&s)
            .filter(|_| s.len() == ids.len())
            .ok_or_else(|| err(*ln, format!("{tuple:?} is not a top simplex")))?;
        let want = permutation_sign(&ids);
        let c = component_of[ids[0] as usize];
        let f = base.sign(top) != want;
        if flip[c].is_some_and(|x| x != f) {
            return Err(err(*ln, "conflicting `orient` lines for one component"));
        }
        flip[c] = Some(f);
    }
    let signs = k
        .simplices(n)
        .iter()
        .zip(base.signs())
        .map(|(s, &e)| if flip[component_of[s[0] as usize]] == Some(true) { -e } else { e })
        .collect();
    Ok(Orientation::from_signs(n, signs))
}

/// Sign of the permutation sorting `ids`.
fn permutation_sign(ids: &[u32]) -> i64 {
    let mut inversions = 0;
    for i in 0..ids.len() {
        for j in i + 1..ids.len() {
            if ids[i] > ids[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn serialize(k: &SimplicialComplex, action: Option<&GroupAction>, orientation: Option<&Orientation>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dim {}", k.dim());
    let _ = writeln!(out, "vertices {}", k.labels().join(" "));
    for f in k.facets() {
        let _ = writeln!(out, "{}", k.labels_of(&f).join(" "));
    }
    if let Some(a) = action.filter(|a| a.group().order() > 1) {
        write_action(&mut out, a);
    }
    if let Some(o) = orientation {
        write_orientation(&mut out, k, o);
    }
    out
}

fn is_standard_cyclic(g: &FiniteGroup) -> bool {
    let n = g.order();
    let cyc = FiniteGroup::cyclic(n);
    g.labels() == cyc.labels() && (0..n as u32).all(|a| (0..n as u32).all(|b| g.mul(a, b) == cyc.mul(a, b)))
}

fn write_action(out: &mut String, a: &GroupAction) {
    let g = a.group();
    if is_standard_cyclic(g) {
        let _ = writeln!(out, "group cyclic {}", g.order());
        write_gen(out, a, 1);
        return;
    }
    let _ = writeln!(out, "group table {}", g.labels().join(" "));
    for x in g.elements() {
        let row: Vec<&str> = g.elements().map(|y| g.label(g.mul(x, y))).collect();
        let _ = writeln!(out, "mul {}: {}", g.label(x), row.join(" "));
    }
    for x in g.elements().filter(|&x| x != g.identity()) {
        write_gen(out, a, x);
    }
}

fn write_gen(out: &mut String, a: &GroupAction, g: u32) {
    let k = a.complex();
    let moves: Vec<String> = a
        .permutation(g)
        .iter()
        .enumerate()
        .filter(|&(v, &w)| v as u32 != w)
        .map(|(v, &w)| format!("{}->{}", k.label(v as u32), k.label(w)))
        .collect();
    let _ = writeln!(out, "gen {}: {}", a.group().label(g), moves.join(" "));
}

/// One `orient` line per component, naming its first top simplex.
fn write_orientation(out: &mut String, k: &SimplicialComplex, o: &Orientation) {
    let n = k.dim();
    let mut done = std::collections::HashSet::new();
    let components = k.components();
    for (top, s) in k.simplices(n).iter().enumerate() {
        let c = components.iter().position(|vs| vs.contains(&s[0])).unwrap_or(0);
        if !done.insert(c) {
            continue;
        }
        let mut t: Simplex = s.clone();
        if o.sign(top) < 0 && t.len() >= 2 {
            t.swap(0, 1);
        }
        let _ = writeln!(out, "orient {}", k.labels_of(&t).join(" "));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ihsig_core::catalog;

    #[test]
    fn sphere_from_four_triangles() {
        let f = parse("# boundary of a tetrahedron\n0 1 2\n0 1 3\n0 2 3\n1 2 3\n").unwrap();
        assert_eq!(f.complex, catalog::sphere(2));
        assert!(f.action.is_none());
    }

    #[test]
    fn octahedron_with_rotation() {
        let text = "a b n\nb c n\nc d n\nd a n\na b s\nb c s\nc d s\nd a s\ngroup cyclic 4\ngen 1: a->b b->c c->d d->a\n";
        let f = parse(text).unwrap();
        assert_eq!(f.action.unwrap().group().order(), 4);
    }

    #[test]
    fn non_simplicial_generator_reports_its_line() {
        let text = "0 1\n1 2\n2 3\n3 0\ngroup cyclic 2\n\ngen 1: 0->1 1->0\n";
        let e = parse(text).unwrap_err();
        assert_eq!(e.line, 7);
        assert!(e.message.contains("not simplicial"), "{}", e.message);
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        assert_eq!(parse("0 1 2\ndim x\n").unwrap_err().line, 2);
        assert_eq!(parse("0 1\ngroup cyclic 2\ngen 1 0->1\n").unwrap_err().line, 3);
        assert_eq!(parse("0 1\ngroup cyclic 2\ngen 7: 0->1 1->0\n").unwrap_err().line, 3);
        assert_eq!(parse("0 1 2\ndim 3\n").unwrap_err().line, 2);
        assert_eq!(parse("0 1\n1 1\n").unwrap_err().line, 2);
    }

    #[test]
    fn orientation_lines_fix_the_sign() {
        let k = catalog::sphere(2);
        let plus = parse("0 1 2\n0 1 3\n0 2 3\n1 2 3\norient 0 1 2\n").unwrap().orientation.unwrap();
        let minus = parse("0 1 2\n0 1 3\n0 2 3\n1 2 3\norient 1 0 2\n").unwrap().orientation.unwrap();
        assert_eq!(plus.negated(), minus);
        assert!(plus.is_coherent(&k));
        assert_eq!(plus.sign(0), 1);
    }

    #[test]
    fn table_groups_round_trip() {
        let c = catalog::mobius_torus_action();
        let text = serialize(c.action.complex(), Some(&c.action), c.orientation.as_ref());
        let f = parse(&text).unwrap();
        assert_eq!(f.action.as_ref(), Some(&c.action));
        assert_eq!(f.orientation, c.orientation);
    }
}
