//! Reading and writing triangulations.
//!
//! Two formats are accepted. The table format mirrors the usual gluing tables:
//!
//! ```text
//! tets: 2
//! 0: 1 (102) | 1 (013) | - | 1 (123)   # face 012 | 013 | 023 | 123
//! ```
//!
//! An entry `t (abc)` on column `012` glues the face opposite vertex 3 to
//! tetrahedron `t`, sending 0, 1, 2 to a, b, c and 3 to the remaining label.
//! `-` leaves a face unglued. An optional fifth column holds a shape parameter.
//!
//! The JSON format stores the full permutation for each face:
//! `{"tets": N, "gluings": [[[t, [p0, p1, p2, p3]] | null, ...], ...]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::gaussian::GaussianRational;
use crate::perm::Perm4;
use crate::triangulation::{Gluing, Triangulation};

/// Face vertex lists for the four table columns, and the face index each names.
const COLUMNS: [([usize; 3], usize); 4] = [([0, 1, 2], 3), ([0, 1, 3], 2), ([0, 2, 3], 1), ([1, 2, 3], 0)];

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedDocument {
    pub triangulation: Triangulation,
    /// Present only when every row of a table carried a shape column.
    pub shapes: Option<Vec<GaussianRational>>,
}

#[derive(Serialize, Deserialize)]
struct JsonDoc {
    tets: usize,
    gluings: Vec<[Option<(usize, [u8; 4])>; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

/// Parses either format, choosing JSON when the document starts with `{`.
pub fn parse_triangulation(text: &str) -> Result<Triangulation> {
    parse_document(text).map(|d| d.triangulation)
}

pub fn parse_document(text: &str) -> Result<ParsedDocument> {
    if text.trim_start().starts_with('{') {
        Ok(ParsedDocument { triangulation: from_json(text)?, shapes: None })
    } else {
        parse_table(text)
    }
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse(ParseError { line, column, message: message.into() })
}

/// A cursor over one line that remembers 1-based columns.
struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    line: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize, offset: usize) -> Self {
        let chars = src.chars().enumerate().map(|(i, c)| (i + 1 + offset, c)).collect();
        Cursor { chars, pos: 0, line, _src: src }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn column(&self) -> usize {
        self.chars.get(self.pos).map(|c| c.0).unwrap_or_else(|| self.chars.last().map(|c| c.0 + 1).unwrap_or(1))
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn expect(&mut self, ch: char) -> Result<()> {
        let col = self.column_after_ws();
        match self.peek() {
            Some(c) if c == ch => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(perr(self.line, col, format!("expected '{ch}', found '{c}'"))),
            None => Err(perr(self.line, col, format!("expected '{ch}', found end of line"))),
        }
    }

    fn column_after_ws(&mut self) -> usize {
        self.skip_ws();
        self.column()
    }

    fn number(&mut self) -> Result<(usize, usize)> {
        let col = self.column_after_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            let found = self.chars.get(self.pos).map(|c| format!("'{}'", c.1)).unwrap_or("end of line".into());
            return Err(perr(self.line, col, format!("expected a number, found {found}")));
        }
        let s: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
        s.parse().map(|n| (n, col)).map_err(|_| perr(self.line, col, "number too large"))
    }

    fn rest(&mut self) -> (String, usize) {
        let col = self.column_after_ws();
        let s: String = self.chars[self.pos..].iter().map(|c| c.1).collect();
        self.pos = self.chars.len();
        (s, col)
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

/// Parses the table format, with an optional shape column.
pub fn parse_table(text: &str) -> Result<ParsedDocument> {
    let mut tri: Option<Triangulation> = None;
    let mut seen_rows: Vec<bool> = Vec::new();
    let mut shapes: Vec<Option<GaussianRational>> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor::new(content, line_no, 0);
        let Some(t) = tri.as_mut() else {
            let col = cur.column_after_ws();
            let word: String = content.trim_start().chars().take_while(|c| c.is_ascii_alphabetic()).collect();
            if word != "tets" {
                return Err(perr(line_no, col, "expected header 'tets: N'"));
            }
            cur.pos += word.len();
            cur.expect(':')?;
            let (n, _) = cur.number()?;
            if !cur.at_end() {
                let col = cur.column();
                return Err(perr(line_no, col, "unexpected text after header"));
            }
            tri = Some(Triangulation::new(n));
            seen_rows = vec![false; n];
            shapes = vec![None; n];
            continue;
        };
        let n = t.tet_count();
        let (row, row_col) = cur.number()?;
        if row >= n {
            return Err(perr(line_no, row_col, format!("tetrahedron label {row} out of range (tets: {n})")));
        }
        if seen_rows[row] {
            return Err(perr(line_no, row_col, format!("duplicate face assignment: row {row} given twice")));
        }
        seen_rows[row] = true;
        cur.expect(':')?;
        for (j, &(face_vertices, face)) in COLUMNS.iter().enumerate() {
            if j > 0 {
                cur.expect('|')?;
            }
            if cur.peek() == Some('-') {
                cur.pos += 1;
                continue;
            }
            let (target, tcol) = cur.number()?;
            if target >= n {
                return Err(perr(line_no, tcol, format!("tetrahedron label {target} out of range (tets: {n})")));
            }
            cur.expect('(')?;
            let icol = cur.column_after_ws();
            let mut images = [0u8; 4];
            let mut used = [false; 4];
            for k in 0..3 {
                let col = cur.column_after_ws();
                let d = match cur.peek() {
                    Some(c) if c.is_ascii_digit() => c.to_digit(10).unwrap() as usize,
                    Some(c) => return Err(perr(line_no, col, format!("expected a vertex label, found '{c}'"))),
                    None => return Err(perr(line_no, col, "expected a vertex label, found end of line")),
                };
                if d > 3 {
                    return Err(perr(line_no, col, format!("vertex label {d} out of range")));
                }
                if used[d] {
                    return Err(perr(line_no, col, format!("vertex label {d} repeated")));
                }
                used[d] = true;
                images[face_vertices[k]] = d as u8;
                cur.pos += 1;
            }
            let missing = (0..4).find(|&v| !used[v]).unwrap();
            images[face] = missing as u8;
            cur.expect(')')?;
            let perm = Perm4::new(images).map_err(|_| perr(line_no, icol, "not a permutation"))?;
            t.set_one_sided(row, face, Some(Gluing { tet: target, perm }));
        }
        if cur.peek() == Some('|') {
            cur.pos += 1;
            let (s, col) = cur.rest();
            let z: GaussianRational = s.trim().parse().map_err(|e: String| perr(line_no, col, e))?;
            shapes[row] = Some(z);
        } else if !cur.at_end() {
            let col = cur.column();
            return Err(perr(line_no, col, "unexpected text after the fourth column"));
        }
    }
    let Some(tri) = tri else {
        return Err(perr(last_line.max(1), 1, "missing header 'tets: N'"));
    };
    if let Some(missing) = seen_rows.iter().position(|&s| !s) {
        return Err(perr(last_line.max(1), 1, format!("no row for tetrahedron {missing}")));
    }
    let shapes = if !shapes.is_empty() && shapes.iter().all(Option::is_some) {
        Some(shapes.into_iter().map(Option::unwrap).collect())
    } else {
        None
    };
    Ok(ParsedDocument { triangulation: tri, shapes })
}

fn table_entry(g: Option<Gluing>, face_vertices: [usize; 3]) -> String {
    match g {
        None => "-".to_string(),
        Some(g) => {
            let [a, b, c] = face_vertices.map(|v| g.perm.apply(v));
            format!("{} ({a}{b}{c})", g.tet)
        }
    }
}

/// Writes the table format; shapes, when given, fill a fifth column.
pub fn to_table(tri: &Triangulation, shapes: Option<&[GaussianRational]>) -> String {
    let mut out = String::new();
    if let Some(label) = &tri.label {
        out.push_str(&format!("# {label}\n"));
    }
    out.push_str(&format!("tets: {}\n", tri.tet_count()));
    for t in 0..tri.tet_count() {
        let cols: Vec<String> =
            COLUMNS.iter().map(|&(fv, face)| table_entry(tri.gluing(t, face), fv)).collect();
        out.push_str(&format!("{t}: {}", cols.join(" | ")));
        if let Some(z) = shapes.and_then(|s| s.get(t)) {
            out.push_str(&format!(" | {z}"));
        }
        out.push('\n');
    }
    out
}

pub fn to_json(tri: &Triangulation) -> String {
    let doc = JsonDoc {
        tets: tri.tet_count(),
        gluings: tri.gluings().iter().map(|faces| faces.map(|g| g.map(|g| (g.tet, g.perm.images())))).collect(),
        label: tri.label.clone(),
    };
    serde_json::to_string(&doc).expect("serialising plain data")
}

pub fn from_json(text: &str) -> Result<Triangulation> {
    let doc: JsonDoc = serde_json::from_str(text)
        .map_err(|e| perr(e.line(), e.column(), format!("malformed JSON document: {e}")))?;
    if doc.gluings.len() != doc.tets {
        return Err(perr(1, 1, format!("'tets' is {} but {} gluing rows given", doc.tets, doc.gluings.len())));
    }
    let mut gluings = Vec::with_capacity(doc.tets);
    for (t, faces) in doc.gluings.iter().enumerate() {
        let mut row = [None; 4];
        for (f, g) in faces.iter().enumerate() {
            if let Some((target, images)) = *g {
                if target >= doc.tets {
                    return Err(perr(1, 1, format!("gluing ({t},{f}) targets tetrahedron {target}, out of range")));
                }
                let perm = Perm4::new(images)
                    .map_err(|_| perr(1, 1, format!("gluing ({t},{f}) has invalid permutation {images:?}")))?;
                row[f] = Some(Gluing { tet: target, perm });
            }
        }
        gluings.push(row);
    }
    let mut tri = Triangulation::from_gluings(gluings);
    tri.label = doc.label;
    Ok(tri)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document() {
        let t = parse_triangulation("tets: 0\n").unwrap();
        assert_eq!(t.tet_count(), 0);
    }

    #[test]
    fn reads_column_convention() {
        let text = "tets: 2\n0: 1 (312) | - | - | -\n1: - | - | - | 0 (120)\n";
        let t = parse_triangulation(text).unwrap();
        let g = t.gluing(0, 3).unwrap();
        assert_eq!(g.tet, 1);
        assert_eq!(g.perm.images(), [3, 1, 2, 0]);
        assert_eq!(t.gluing(1, 0).unwrap().perm.images(), [3, 1, 2, 0]);
    }

    #[test]
    fn reports_positions() {
        let err = parse_triangulation("tets: 1\n0: 0 (3x2) | - | - | -\n").unwrap_err();
        match err {
            Error::Parse(p) => assert_eq!((p.line, p.column), (2, 8)),
            e => panic!("{e}"),
        }
        assert!(matches!(parse_triangulation("tets: 1\n0: 5 (012) | - | - | -\n"), Err(Error::Parse(_))));
        let dup = parse_triangulation("tets: 1\n0: - | - | - | -\n0: - | - | - | -\n").unwrap_err();
        assert!(dup.to_string().contains("duplicate"), "{dup}");
        assert!(parse_triangulation("tet 1").is_err());
        assert!(parse_triangulation("tets: 1\n0: 0 (011) | - | - | -\n").is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = "tets: 2\n0: 1 (312) | 1 (013) | - | -\n1: - | 0 (013) | - | 0 (120)  # c\n";
        let t = parse_triangulation(text).unwrap();
        let j = to_json(&t);
        assert_eq!(from_json(&j).unwrap(), t);
        assert_eq!(to_json(&from_json(&j).unwrap()), j);
        assert_eq!(parse_triangulation(&to_table(&t, None)).unwrap(), t);
    }

    #[test]
    fn json_errors_carry_positions() {
        match from_json("{\"tets\": 1,\n \"gluings\": [[null, null, null,]]}") {
            Err(Error::Parse(p)) => assert_eq!(p.line, 2),
            other => panic!("{other:?}"),
        }
        assert!(from_json("{\"tets\":1,\"gluings\":[[[0,[0,0,1,2]],null,null,null]]}").is_err());
    }

    #[test]
    fn shape_column() {
        let text = "tets: 1\n0: - | - | - | - | 1/2+1/2i\n";
        let d = parse_document(text).unwrap();
        assert_eq!(d.shapes.unwrap()[0], "1/2+1/2i".parse().unwrap());
    }
}
