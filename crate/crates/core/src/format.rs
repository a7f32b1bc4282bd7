//! Line-oriented text formats.
//!
//! Every file is a fixed sequence of sections. A section starts with its
//! keyword at the beginning of an unindented line; its entries follow on the
//! same line or on later lines, separated by whitespace. `#` starts a
//! comment. Ids use the characters `A-Z a-z 0-9 _ | ( ) -`.
//!
//! | kind       | sections                                                       |
//! |------------|----------------------------------------------------------------|
//! | groupoid   | `OBJECTS ARROWS UNITS INV COMP`                                |
//! | functor    | `DOM COD OBJMAP ARRMAP`                                        |
//! | extension  | `EXTENSION DOM COD OBJMAP ARRMAP`                              |
//! | bundle     | `BUNDLE GROUPOID BASE CARRIER PROJ ANCHORS ACTION`             |
//! | bibundle   | `BIBUNDLE LEFT RIGHT CARRIER ANCHORS LACTION RACTION`          |
//!
//! Entry shapes: arrows `f:x->y`, units `x=f`, inverses `f=g`, composites
//! `g.f=h` for `comp(g, f) = h`, map entries `a=b`, projections `p=m`,
//! anchors `p=x` (bibundles `p=x:y`), right actions `p.h=q`, left actions
//! `g.p=q`. `DOM`, `COD`, `GROUPOID`, `LEFT` and `RIGHT` take one path,
//! relative to the file that names it.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::action::{Action, Side};
use crate::bibundle::Bibundle;
use crate::bundle::PrincipalBundle;
use crate::error::{Error, StructureError};
use crate::functor::GroupoidMap;
use crate::groupoid::{FinGroupoid, GroupoidBuilder, NONE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: duplicate {kind} id `{id}`")]
    DuplicateId { line: usize, kind: &'static str, id: String },
    #[error("line {line}: dangling id `{id}` in {context}")]
    DanglingId { line: usize, id: String, context: String },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

impl FormatError {
    fn at(line: usize, e: StructureError) -> Self {
        match e {
            StructureError::DuplicateId { kind, id } => FormatError::DuplicateId { line, kind, id },
            StructureError::DanglingId { id, context } => FormatError::DanglingId { line, id, context },
            other => FormatError::Parse { line, message: other.to_string() },
        }
    }

    fn parse(line: usize, message: impl Into<String>) -> Self {
        FormatError::Parse { line, message: message.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Groupoid,
    Functor,
    Extension,
    Bundle,
    Bibundle,
}

impl FileKind {
    fn sections(self) -> &'static [&'static str] {
        match self {
            FileKind::Groupoid => &["OBJECTS", "ARROWS", "UNITS", "INV", "COMP"],
            FileKind::Functor => &["DOM", "COD", "OBJMAP", "ARRMAP"],
            FileKind::Extension => &["EXTENSION", "DOM", "COD", "OBJMAP", "ARRMAP"],
            FileKind::Bundle => &["BUNDLE", "GROUPOID", "BASE", "CARRIER", "PROJ", "ANCHORS", "ACTION"],
            FileKind::Bibundle => &["BIBUNDLE", "LEFT", "RIGHT", "CARRIER", "ANCHORS", "LACTION", "RACTION"],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FileKind::Groupoid => "groupoid",
            FileKind::Functor => "functor",
            FileKind::Extension => "extension",
            FileKind::Bundle => "bundle",
            FileKind::Bibundle => "bibundle",
        }
    }
}

fn lines(text: &str) -> impl Iterator<Item = (usize, bool, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then(|| (i + 1, !body.starts_with(char::is_whitespace), tokens))
    })
}

/// The kind of file, from its first keyword.
pub fn detect(text: &str) -> Result<FileKind, FormatError> {
    let Some((line, _, tokens)) = lines(text).next() else {
        return Err(FormatError::parse(1, "empty file"));
    };
    Ok(match tokens[0] {
        "OBJECTS" => FileKind::Groupoid,
        "DOM" => FileKind::Functor,
        "EXTENSION" => FileKind::Extension,
        "BUNDLE" => FileKind::Bundle,
        "BIBUNDLE" => FileKind::Bibundle,
        other => return Err(FormatError::parse(line, format!("unrecognized file; starts with `{other}`"))),
    })
}

struct Section<'a> {
    line: usize,
    entries: Vec<(usize, &'a str)>,
}

fn split_sections(text: &str, kind: FileKind) -> Result<Vec<Section<'_>>, FormatError> {
    let expected = kind.sections();
    let mut out: Vec<Section> = Vec::new();
    for (line, flush, tokens) in lines(text) {
        let next = expected.get(out.len());
        if flush && next == Some(&tokens[0]) {
            out.push(Section { line, entries: tokens[1..].iter().map(|&t| (line, t)).collect() });
            continue;
        }
        if flush && expected.contains(&tokens[0]) {
            let wanted = next.map_or("end of file".to_string(), |s| format!("section {s}"));
            return Err(FormatError::parse(line, format!("section {} out of order; expected {wanted}", tokens[0])));
        }
        let Some(current) = out.last_mut() else {
            return Err(FormatError::parse(line, format!("expected section {}", expected[0])));
        };
        current.entries.extend(tokens.iter().map(|&t| (line, t)));
    }
    if out.len() < expected.len() {
        let line = text.lines().count().max(1);
        return Err(FormatError::parse(line, format!("missing section {}", expected[out.len()])));
    }
    Ok(out)
}

fn is_id(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "_|()-".contains(c))
}

fn id(line: usize, s: &str) -> Result<&str, FormatError> {
    if is_id(s) {
        Ok(s)
    } else {
        Err(FormatError::parse(line, format!("invalid id `{s}`")))
    }
}

fn pair(line: usize, entry: &str, sep: char) -> Result<(&str, &str), FormatError> {
    let (a, b) = entry
        .split_once(sep)
        .ok_or_else(|| FormatError::parse(line, format!("expected `a{sep}b`, found `{entry}`")))?;
    Ok((id(line, a)?, id(line, b)?))
}

/// `a.b=c`
fn triple(line: usize, entry: &str) -> Result<(&str, &str, &str), FormatError> {
    let (lhs, c) = entry
        .split_once('=')
        .ok_or_else(|| FormatError::parse(line, format!("expected `a.b=c`, found `{entry}`")))?;
    let (a, b) = pair(line, lhs, '.')?;
    Ok((a, b, id(line, c)?))
}

fn single<'a>(section: &Section<'a>, keyword: &str) -> Result<&'a str, FormatError> {
    match section.entries.as_slice() {
        [(_, path)] => Ok(path),
        _ => Err(FormatError::parse(section.line, format!("{keyword} takes exactly one path"))),
    }
}

fn no_entries(section: &Section<'_>, keyword: &str) -> Result<(), FormatError> {
    match section.entries.first() {
        None => Ok(()),
        Some(&(line, _)) => Err(FormatError::parse(line, format!("{keyword} takes no entries"))),
    }
}

pub fn parse_groupoid(text: &str) -> Result<FinGroupoid, FormatError> {
    let s = split_sections(text, FileKind::Groupoid)?;
    let mut b = GroupoidBuilder::new();
    for &(line, o) in &s[0].entries {
        b.object(id(line, o)?).map_err(|e| FormatError::at(line, e))?;
    }
    for &(line, entry) in &s[1].entries {
        let (name, ends) = entry
            .split_once(':')
            .ok_or_else(|| FormatError::parse(line, format!("expected `f:x->y`, found `{entry}`")))?;
        let arrow = ends.find('>').filter(|&p| p > 0 && ends.as_bytes()[p - 1] == b'-');
        let Some(p) = arrow else {
            return Err(FormatError::parse(line, format!("expected `f:x->y`, found `{entry}`")));
        };
        let (src, tgt) = (&ends[..p - 1], &ends[p + 1..]);
        b.arrow(id(line, name)?, id(line, src)?, id(line, tgt)?).map_err(|e| FormatError::at(line, e))?;
    }
    for &(line, entry) in &s[2].entries {
        let (x, f) = pair(line, entry, '=')?;
        b.unit(x, f).map_err(|e| FormatError::at(line, e))?;
    }
    for &(line, entry) in &s[3].entries {
        let (f, g) = pair(line, entry, '=')?;
        b.inverse(f, g).map_err(|e| FormatError::at(line, e))?;
    }
    let mut seen = HashMap::new();
    for &(line, entry) in &s[4].entries {
        let (g, f, h) = triple(line, entry)?;
        if seen.insert((g, f), line).is_some() {
            return Err(FormatError::DuplicateId { line, kind: "composition entry", id: format!("{g}.{f}") });
        }
        b.compose(g, f, h).map_err(|e| FormatError::at(line, e))?;
    }
    Ok(b.build()?)
}

fn push_section(out: &mut String, keyword: &str, entries: impl IntoIterator<Item = String>) {
    out.push_str(keyword);
    out.push('\n');
    for e in entries {
        out.push_str("  ");
        out.push_str(&e);
        out.push('\n');
    }
}

pub fn render_groupoid(g: &FinGroupoid) -> String {
    let mut out = String::new();
    push_section(&mut out, "OBJECTS", g.objects().iter().cloned());
    push_section(
        &mut out,
        "ARROWS",
        (0..g.num_arrows()).map(|a| format!("{}:{}->{}", g.arrow_id(a), g.object_id(g.src(a)), g.object_id(g.tgt(a)))),
    );
    push_section(&mut out, "UNITS", (0..g.num_objects()).map(|x| format!("{}={}", g.object_id(x), g.arrow_id(g.unit(x)))));
    push_section(&mut out, "INV", (0..g.num_arrows()).map(|a| format!("{}={}", g.arrow_id(a), g.arrow_id(g.inv(a)))));
    let mut comp: Vec<(usize, usize, usize)> = Vec::new();
    for g_ in 0..g.num_arrows() {
        for f in 0..g.num_arrows() {
            if let Some(h) = g.comp(g_, f) {
                comp.push((g_, f, h));
            }
        }
    }
    push_section(&mut out, "COMP", comp.into_iter().map(|(a, b, c)| format!("{}.{}={}", g.arrow_id(a), g.arrow_id(b), g.arrow_id(c))));
    out
}

/// A functor file with the paths it refers to.
#[derive(Debug, Clone)]
pub struct MapFile {
    pub map: GroupoidMap,
    pub dom_path: String,
    pub cod_path: String,
    /// Marked `EXTENSION`.
    pub extension: bool,
}

/// Parses a functor or extension file; `resolve` loads referenced groupoids.
pub fn parse_map(text: &str, mut resolve: impl FnMut(&str) -> Result<Arc<FinGroupoid>, Error>) -> Result<MapFile, Error> {
    let kind = detect(text)?;
    if !matches!(kind, FileKind::Functor | FileKind::Extension) {
        return Err(Error::Format(FormatError::parse(1, "not a functor file")));
    }
    let mut s = split_sections(text, kind)?;
    let extension = kind == FileKind::Extension;
    if extension {
        no_entries(&s[0], "EXTENSION")?;
        s.remove(0);
    }
    let dom_path = single(&s[0], "DOM")?.to_string();
    let cod_path = single(&s[1], "COD")?.to_string();
    let dom = resolve(&dom_path)?;
    let cod = resolve(&cod_path)?;
    let f0 = map_table(&s[2], dom.num_objects(), |x| dom.object_index(x), |y| cod.object_index(y), "object map", |i| dom.object_id(i))?;
    let f1 = map_table(&s[3], dom.num_arrows(), |x| dom.arrow_index(x), |y| cod.arrow_index(y), "arrow map", |i| dom.arrow_id(i))?;
    let map = GroupoidMap::new(dom, cod, f0, f1)?;
    Ok(MapFile { map, dom_path, cod_path, extension })
}

fn map_table<'a>(
    section: &Section<'_>,
    n: usize,
    from: impl Fn(&str) -> Option<usize>,
    to: impl Fn(&str) -> Option<usize>,
    table: &'static str,
    name: impl Fn(usize) -> &'a str,
) -> Result<Vec<usize>, FormatError> {
    let mut out = vec![NONE; n];
    for &(line, entry) in &section.entries {
        let (a, b) = pair(line, entry, '=')?;
        let i = from(a).ok_or_else(|| FormatError::DanglingId { line, id: a.into(), context: format!("{table} domain") })?;
        let j = to(b).ok_or_else(|| FormatError::DanglingId { line, id: b.into(), context: format!("{table} codomain") })?;
        if out[i] != NONE {
            return Err(FormatError::DuplicateId { line, kind: "map entry", id: a.into() });
        }
        out[i] = j;
    }
    if let Some(i) = out.iter().position(|&j| j == NONE) {
        return Err(StructureError::MissingEntry { table, id: name(i).into() }.into());
    }
    Ok(out)
}

pub fn render_map(m: &MapFile) -> String {
    let mut out = String::new();
    if m.extension {
        out.push_str("EXTENSION\n");
    }
    out.push_str(&format!("DOM {}\nCOD {}\n", m.dom_path, m.cod_path));
    let (d, c) = (m.map.dom(), m.map.cod());
    push_section(&mut out, "OBJMAP", (0..d.num_objects()).map(|x| format!("{}={}", d.object_id(x), c.object_id(m.map.object(x)))));
    push_section(&mut out, "ARRMAP", (0..d.num_arrows()).map(|a| format!("{}={}", d.arrow_id(a), c.arrow_id(m.map.arrow(a)))));
    out
}

#[derive(Debug, Clone)]
pub struct BundleFile {
    pub bundle: PrincipalBundle,
    pub groupoid_path: String,
}

fn carrier_ids(section: &Section<'_>) -> Result<(Vec<String>, HashMap<String, usize>), FormatError> {
    let mut ids = Vec::new();
    let mut index = HashMap::new();
    for &(line, p) in &section.entries {
        let p = id(line, p)?;
        if index.insert(p.to_string(), ids.len()).is_some() {
            return Err(FormatError::DuplicateId { line, kind: "carrier", id: p.into() });
        }
        ids.push(p.to_string());
    }
    Ok((ids, index))
}

fn lookup(index: &HashMap<String, usize>, line: usize, key: &str, context: &str) -> Result<usize, FormatError> {
    index.get(key).copied().ok_or_else(|| FormatError::DanglingId { line, id: key.into(), context: context.into() })
}

fn object_lookup(g: &FinGroupoid, line: usize, key: &str, context: &str) -> Result<usize, FormatError> {
    g.object_index(key).ok_or_else(|| FormatError::DanglingId { line, id: key.into(), context: context.into() })
}

fn arrow_lookup(g: &FinGroupoid, line: usize, key: &str, context: &str) -> Result<usize, FormatError> {
    g.arrow_index(key).ok_or_else(|| FormatError::DanglingId { line, id: key.into(), context: context.into() })
}

fn fill_once(table: &mut [usize], i: usize, value: usize, line: usize, kind: &'static str, key: &str) -> Result<(), FormatError> {
    if table[i] != NONE {
        return Err(FormatError::DuplicateId { line, kind, id: key.into() });
    }
    table[i] = value;
    Ok(())
}

fn complete(table: &[usize], names: &[String], what: &'static str) -> Result<(), FormatError> {
    match table.iter().position(|&v| v == NONE) {
        Some(i) => Err(StructureError::MissingEntry { table: what, id: names[i].clone() }.into()),
        None => Ok(()),
    }
}

/// Action entries `p.h=q` (right) or `h.p=q` (left).
fn action_table(
    section: &Section<'_>,
    side: Side,
    carrier: &HashMap<String, usize>,
    g: &FinGroupoid,
    n: usize,
) -> Result<Vec<usize>, FormatError> {
    let na = g.num_arrows();
    let mut table = vec![NONE; n * na];
    for &(line, entry) in &section.entries {
        let (a, b, c) = triple(line, entry)?;
        let (p, h) = match side {
            Side::Right => (a, b),
            Side::Left => (b, a),
        };
        let p = lookup(carrier, line, p, "action")?;
        let h = arrow_lookup(g, line, h, "action")?;
        let q = lookup(carrier, line, c, "action")?;
        fill_once(&mut table, p * na + h, q, line, "action entry", entry)?;
    }
    Ok(table)
}

pub fn parse_bundle(text: &str, mut resolve: impl FnMut(&str) -> Result<Arc<FinGroupoid>, Error>) -> Result<BundleFile, Error> {
    if detect(text)? != FileKind::Bundle {
        return Err(Error::Format(FormatError::parse(1, "not a bundle file")));
    }
    let s = split_sections(text, FileKind::Bundle)?;
    no_entries(&s[0], "BUNDLE")?;
    let groupoid_path = single(&s[1], "GROUPOID")?.to_string();
    let g = resolve(&groupoid_path)?;
    let (base, base_ix) = carrier_ids(&s[2])?;
    let (carrier, carrier_ix) = carrier_ids(&s[3])?;
    let n = carrier.len();
    let mut proj = vec![NONE; n];
    for &(line, entry) in &s[4].entries {
        let (p, m) = pair(line, entry, '=')?;
        let (i, m) = (lookup(&carrier_ix, line, p, "projection")?, lookup(&base_ix, line, m, "projection")?);
        fill_once(&mut proj, i, m, line, "projection entry", p)?;
    }
    complete(&proj, &carrier, "projection")?;
    let mut anchor = vec![NONE; n];
    for &(line, entry) in &s[5].entries {
        let (p, x) = pair(line, entry, '=')?;
        let (i, x) = (lookup(&carrier_ix, line, p, "anchors")?, object_lookup(&g, line, x, "anchors")?);
        fill_once(&mut anchor, i, x, line, "anchor entry", p)?;
    }
    complete(&anchor, &carrier, "anchor")?;
    let table = action_table(&s[6], Side::Right, &carrier_ix, &g, n)?;
    let action = Action::from_table(g, Side::Right, anchor, table)?;
    Ok(BundleFile { bundle: PrincipalBundle::new(carrier, base, proj, action)?, groupoid_path })
}

fn action_entries(action: &Action, carrier: &[String]) -> Vec<String> {
    let g = action.groupoid();
    let mut out = Vec::new();
    for p in 0..action.len() {
        for h in 0..g.num_arrows() {
            if let Some(q) = action.act(p, h) {
                out.push(match action.side() {
                    Side::Right => format!("{}.{}={}", carrier[p], g.arrow_id(h), carrier[q]),
                    Side::Left => format!("{}.{}={}", g.arrow_id(h), carrier[p], carrier[q]),
                });
            }
        }
    }
    out
}

pub fn render_bundle(f: &BundleFile) -> String {
    let b = &f.bundle;
    let g = b.groupoid();
    let mut out = format!("BUNDLE\nGROUPOID {}\n", f.groupoid_path);
    push_section(&mut out, "BASE", b.base().iter().cloned());
    push_section(&mut out, "CARRIER", b.carrier().iter().cloned());
    push_section(&mut out, "PROJ", (0..b.carrier().len()).map(|p| format!("{}={}", b.carrier()[p], b.base()[b.proj(p)])));
    push_section(&mut out, "ANCHORS", (0..b.carrier().len()).map(|p| format!("{}={}", b.carrier()[p], g.object_id(b.anchor(p)))));
    push_section(&mut out, "ACTION", action_entries(b.action(), b.carrier()));
    out
}

#[derive(Debug, Clone)]
pub struct BibundleFile {
    pub bibundle: Bibundle,
    pub left_path: String,
    pub right_path: String,
}

pub fn parse_bibundle(text: &str, mut resolve: impl FnMut(&str) -> Result<Arc<FinGroupoid>, Error>) -> Result<BibundleFile, Error> {
    if detect(text)? != FileKind::Bibundle {
        return Err(Error::Format(FormatError::parse(1, "not a bibundle file")));
    }
    let s = split_sections(text, FileKind::Bibundle)?;
    no_entries(&s[0], "BIBUNDLE")?;
    let left_path = single(&s[1], "LEFT")?.to_string();
    let right_path = single(&s[2], "RIGHT")?.to_string();
    let g = resolve(&left_path)?;
    let h = resolve(&right_path)?;
    let (carrier, carrier_ix) = carrier_ids(&s[3])?;
    let n = carrier.len();
    let (mut left_anchor, mut right_anchor) = (vec![NONE; n], vec![NONE; n]);
    for &(line, entry) in &s[4].entries {
        let (p, ends) = entry
            .split_once('=')
            .ok_or_else(|| FormatError::parse(line, format!("expected `p=x:y`, found `{entry}`")))?;
        let (x, y) = pair(line, ends, ':')?;
        let i = lookup(&carrier_ix, line, id(line, p)?, "anchors")?;
        fill_once(&mut left_anchor, i, object_lookup(&g, line, x, "left anchors")?, line, "anchor entry", p)?;
        right_anchor[i] = object_lookup(&h, line, y, "right anchors")?;
    }
    complete(&left_anchor, &carrier, "anchor")?;
    let left_table = action_table(&s[5], Side::Left, &carrier_ix, &g, n)?;
    let right_table = action_table(&s[6], Side::Right, &carrier_ix, &h, n)?;
    let left = Action::from_table(g, Side::Left, left_anchor, left_table)?;
    let right = Action::from_table(h, Side::Right, right_anchor, right_table)?;
    Ok(BibundleFile { bibundle: Bibundle::new(carrier, left, right)?, left_path, right_path })
}

pub fn render_bibundle(f: &BibundleFile) -> String {
    let b = &f.bibundle;
    let (g, h) = (b.left_groupoid(), b.right_groupoid());
    let mut out = format!("BIBUNDLE\nLEFT {}\nRIGHT {}\n", f.left_path, f.right_path);
    push_section(&mut out, "CARRIER", b.carrier().iter().cloned());
    push_section(
        &mut out,
        "ANCHORS",
        (0..b.len()).map(|p| format!("{}={}:{}", b.carrier()[p], g.object_id(b.left_anchor(p)), h.object_id(b.right_anchor(p)))),
    );
    push_section(&mut out, "LACTION", action_entries(b.left(), b.carrier()));
    push_section(&mut out, "RACTION", action_entries(b.right(), b.carrier()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bibundle::bibundle_from_functor;
    use crate::bundle::unit_bundle;
    use crate::group::FinGroup;

    const UNIT_PAIR: &str = "OBJECTS a b\nARROWS ida:a->a idb:b->b\nUNITS a=ida b=idb\nINV ida=ida idb=idb\nCOMP ida.ida=ida idb.idb=idb\n";

    #[test]
    fn parses_inline_entries() {
        let g = parse_groupoid(UNIT_PAIR).unwrap();
        assert_eq!(g, FinGroupoid::unit_groupoid(&["a", "b"]).relabel(vec!["a".into(), "b".into()], vec!["ida".into(), "idb".into()]).unwrap());
        assert!(g.validate().is_ok());
        assert_eq!(parse_groupoid(&render_groupoid(&g)).unwrap(), g);
    }

    #[test]
    fn dangling_object_has_a_line() {
        let text = "# two points\nOBJECTS a b\nARROWS\n  ida:a->a\n  f:a->c\nUNITS a=ida\nINV\nCOMP\n";
        match parse_groupoid(text) {
            Err(FormatError::DanglingId { line, id, .. }) => assert_eq!((line, id.as_str()), (5, "c")),
            other => panic!("{other:?}"),
        }
        let dup = "OBJECTS a a\nARROWS\nUNITS\nINV\nCOMP\n";
        assert!(matches!(parse_groupoid(dup), Err(FormatError::DuplicateId { line: 1, .. })));
        let order = "OBJECTS a\nUNITS a=ida\nARROWS ida:a->a\nINV\nCOMP\n";
        assert!(matches!(parse_groupoid(order), Err(FormatError::Parse { line: 2, .. })));
    }

    #[test]
    fn arrow_entries_with_dashes() {
        let text = "OBJECTS x- y\nARROWS f-:x-->y i:x-->x- j:y->y g:y->x-\nUNITS x-=i y=j\nINV f-=g g=f- i=i j=j\nCOMP\n";
        let g = parse_groupoid(text).unwrap();
        assert_eq!(g.object_id(g.src(0)), "x-");
        assert_eq!(g.object_id(g.tgt(0)), "y");
    }

    #[test]
    fn bundles_round_trip() {
        let g = Arc::new(FinGroupoid::from_group(&FinGroup::cyclic(3), "pt"));
        let f = BundleFile { bundle: unit_bundle(&g), groupoid_path: "z3.ggd".into() };
        let text = render_bundle(&f);
        let back = parse_bundle(&text, |_| Ok(g.clone())).unwrap();
        assert_eq!(back.bundle, f.bundle);
        assert_eq!(render_bundle(&back), text);

        let p = bibundle_from_functor(&GroupoidMap::identity(g.clone()));
        let f = BibundleFile { bibundle: p, left_path: "z3.ggd".into(), right_path: "z3.ggd".into() };
        let text = render_bibundle(&f);
        let back = parse_bibundle(&text, |_| Ok(g.clone())).unwrap();
        assert_eq!(back.bibundle, f.bibundle);
        assert_eq!(render_bibundle(&back), text);
    }

    #[test]
    fn maps_round_trip() {
        let z4 = Arc::new(FinGroupoid::from_group(&FinGroup::cyclic(4), "pt"));
        let z2 = Arc::new(FinGroupoid::from_group(&FinGroup::cyclic(2), "pt"));
        let map = GroupoidMap::new(z4.clone(), z2.clone(), vec![0], vec![0, 1, 0, 1]).unwrap();
        let f = MapFile { map, dom_path: "z4.ggd".into(), cod_path: "z2.ggd".into(), extension: true };
        let text = render_map(&f);
        assert_eq!(detect(&text).unwrap(), FileKind::Extension);
        let back = parse_map(&text, |p| Ok(if p == "z4.ggd" { z4.clone() } else { z2.clone() })).unwrap();
        assert_eq!(back.map, f.map);
        assert_eq!(render_map(&back), text);
    }
}
