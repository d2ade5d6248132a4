//! Gmsh MSH 2.2 ASCII reader and writer (nodes and 3-node triangles only).

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::TriMesh;
use crate::error::{RemapError, Result};
use crate::scalar::Real;

const TRIANGLE: u32 = 2;

pub fn load_msh<T: Real>(path: impl AsRef<Path>) -> Result<TriMesh<T>> {
    let text = std::fs::read_to_string(path)?;
    parse_msh(&text)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next_nonempty(&mut self) -> Option<&'a str> {
        for (i, l) in self.inner.by_ref() {
            self.line = i + 1;
            let l = l.trim();
            if !l.is_empty() {
                return Some(l);
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<&'a str> {
        self.next_nonempty().ok_or_else(|| RemapError::Parse {
            line: self.line,
            message: format!("unexpected end of file, expected {what}"),
        })
    }

    fn err(&self, message: impl Into<String>) -> RemapError {
        RemapError::Parse {
            line: self.line,
            message: message.into(),
        }
    }
}

fn num<N: std::str::FromStr>(lines: &Lines<'_>, tok: Option<&str>, what: &str) -> Result<N> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| lines.err(format!("invalid {what}")))
}

pub fn parse_msh<T: Real>(text: &str) -> Result<TriMesh<T>> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        line: 0,
    };
    let mut node_index: HashMap<u64, usize> = HashMap::new();
    let mut nodes = Vec::new();
    let mut elements = Vec::new();
    let mut seen_format = false;

    while let Some(header) = lines.next_nonempty() {
        match header {
            "$MeshFormat" => {
                let l = lines.expect("format line")?;
                let mut tok = l.split_whitespace();
                let version: f64 = num(&lines, tok.next(), "format version")?;
                let file_type: u32 = num(&lines, tok.next(), "file type")?;
                if !(2.0..3.0).contains(&version) {
                    return Err(lines.err(format!("unsupported MSH version {version}")));
                }
                if file_type != 0 {
                    return Err(lines.err("binary MSH files are not supported"));
                }
                if lines.expect("$EndMeshFormat")? != "$EndMeshFormat" {
                    return Err(lines.err("expected $EndMeshFormat"));
                }
                seen_format = true;
            }
            "$Nodes" => {
                let l = lines.expect("node count")?;
                let count: usize = num(&lines, Some(l), "node count")?;
                nodes.reserve(count);
                for _ in 0..count {
                    let l = lines.expect("node line")?;
                    let mut tok = l.split_whitespace();
                    let id: u64 = num(&lines, tok.next(), "node id")?;
                    let x: f64 = num(&lines, tok.next(), "node x")?;
                    let y: f64 = num(&lines, tok.next(), "node y")?;
                    if node_index.insert(id, nodes.len()).is_some() {
                        return Err(lines.err(format!("duplicate node id {id}")));
                    }
                    nodes.push([T::lit(x), T::lit(y)]);
                }
                if lines.expect("$EndNodes")? != "$EndNodes" {
                    return Err(lines.err("expected $EndNodes"));
                }
            }
            "$Elements" => {
                let l = lines.expect("element count")?;
                let count: usize = num(&lines, Some(l), "element count")?;
                for _ in 0..count {
                    let l = lines.expect("element line")?;
                    let tok: Vec<&str> = l.split_whitespace().collect();
                    let kind: u32 = num(&lines, tok.get(1).copied(), "element type")?;
                    let ntags: usize = num(&lines, tok.get(2).copied(), "tag count")?;
                    if kind != TRIANGLE {
                        continue;
                    }
                    if tok.len() != 3 + ntags + 3 {
                        return Err(lines.err("triangle must list exactly 3 nodes"));
                    }
                    let mut tri = [0usize; 3];
                    for (k, slot) in tri.iter_mut().enumerate() {
                        let id: u64 = num(&lines, Some(tok[3 + ntags + k]), "element node id")?;
                        *slot = *node_index
                            .get(&id)
                            .ok_or_else(|| lines.err(format!("unknown node id {id}")))?;
                    }
                    elements.push(tri);
                }
                if lines.expect("$EndElements")? != "$EndElements" {
                    return Err(lines.err("expected $EndElements"));
                }
            }
            other if other.starts_with('$') && !other.starts_with("$End") => {
                // unknown section, skip to its end marker
                let end = format!("$End{}", &other[1..]);
                loop {
                    if lines.expect(&end)? == end {
                        break;
                    }
                }
            }
            other => return Err(lines.err(format!("unexpected line '{other}'"))),
        }
    }
    if !seen_format {
        return Err(RemapError::Parse {
            line: 1,
            message: "missing $MeshFormat section".into(),
        });
    }
    TriMesh::new(nodes, elements)
}

/// Serializes a mesh (or any triangle soup) as MSH 2.2 ASCII.
pub fn write_msh<T: Real>(mesh: &TriMesh<T>) -> String {
    format_msh(mesh.nodes(), mesh.elements())
}

pub(crate) fn format_msh<T: Real>(nodes: &[[T; 2]], elements: &[[usize; 3]]) -> String {
    let mut s = String::with_capacity(64 * (nodes.len() + elements.len()));
    s.push_str("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n");
    let _ = writeln!(s, "{}", nodes.len());
    for (i, p) in nodes.iter().enumerate() {
        // `{:?}` prints the shortest representation that round-trips exactly
        let _ = writeln!(s, "{} {:?} {:?} 0", i + 1, p[0].as_f64(), p[1].as_f64());
    }
    s.push_str("$EndNodes\n$Elements\n");
    let _ = writeln!(s, "{}", elements.len());
    for (i, e) in elements.iter().enumerate() {
        let _ = writeln!(s, "{} 2 2 1 1 {} {} {}", i + 1, e[0] + 1, e[1] + 1, e[2] + 1);
    }
    s.push_str("$EndElements\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_square_mesh, Diagonal};

    const SQUARE: &str = "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n4\n\
        1 0 0 0\n2 1 0 0\n3 1 1 0\n4 0 1 0\n$EndNodes\n$Elements\n2\n\
        1 2 2 0 1 1 2 3\n2 2 2 0 1 1 3 4\n$EndElements\n";

    #[test]
    fn reads_unit_square() {
        let m: TriMesh<f64> = parse_msh(SQUARE).unwrap();
        assert_eq!(m.num_elements(), 2);
        assert!((m.total_area() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn clockwise_triangle_is_normalized() {
        let text = "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n3\n\
            1 0 0 0\n2 0 1 0\n3 1 0 0\n$EndNodes\n$Elements\n1\n1 2 0 1 2 3\n$EndElements\n";
        let m: TriMesh<f64> = parse_msh(text).unwrap();
        assert!((m.areas()[0] - 0.5).abs() < 1e-15);
        assert!(crate::geometry::signed_area(&m.triangle(0)) > 0.0);
    }

    #[test]
    fn line_elements_are_skipped() {
        let text = "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$PhysicalNames\n1\n1 1 \"wall\"\n$EndPhysicalNames\n\
            $Nodes\n3\n10 0 0 0\n20 1 0 0\n30 0 1 0\n$EndNodes\n$Elements\n4\n\
            1 1 2 1 1 10 20\n2 1 2 1 1 20 30\n3 1 2 1 1 30 10\n4 2 2 0 1 10 20 30\n$EndElements\n";
        let m: TriMesh<f64> = parse_msh(text).unwrap();
        assert_eq!(m.num_elements(), 1);
        assert_eq!(m.num_nodes(), 3);
    }

    #[test]
    fn errors_are_reported() {
        let no_tri = "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n2\n1 0 0 0\n2 1 0 0\n$EndNodes\n\
            $Elements\n1\n1 1 2 0 1 1 2\n$EndElements\n";
        assert!(matches!(parse_msh::<f64>(no_tri), Err(RemapError::EmptyMesh)));
        let bad = SQUARE.replace("2 1 0 0\n", "2 one 0 0\n");
        assert!(matches!(parse_msh::<f64>(&bad), Err(RemapError::Parse { line: 7, .. })));
        let truncated = &SQUARE[..SQUARE.len() - 14];
        assert!(matches!(parse_msh::<f64>(truncated), Err(RemapError::Parse { .. })));
        let degenerate = SQUARE.replace("3 1 1 0", "3 2 0 0");
        assert!(matches!(
            parse_msh::<f64>(&degenerate),
            Err(RemapError::DegenerateElement { element: 0, .. })
        ));
    }

    #[test]
    fn write_then_read_round_trips() {
        let m = generate_square_mesh::<f64>(6, 0.3, 11, Diagonal::Alternating).unwrap();
        let back: TriMesh<f64> = parse_msh(&write_msh(&m)).unwrap();
        assert_eq!(back.nodes(), m.nodes());
        assert_eq!(back.elements(), m.elements());
        assert_eq!(back.adjacency(), m.adjacency());
    }
}
