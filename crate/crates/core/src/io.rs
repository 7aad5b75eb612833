//! Text formats for graphs and 3AP-free sets, JSON for RS certificates.
//!
//! Graph file:
//!
//! ```text
//! #blowup-lab-graph v1 <label>
//! <n> <m>
//! <u> <v>        (m lines, u < v, ascending)
//! ```
//!
//! Set file:
//!
//! ```text
//! #apfree v1 <n> <method>
//! <x_1> <x_2> ...
//! ```

use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::constructions::{ApFreeSet, ApMethod, RsCertificate, RsCertificateFile};
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder};

const GRAPH_MAGIC: &str = "#blowup-lab-graph v1";
const SET_MAGIC: &str = "#apfree v1";

pub fn write_graph<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    match g.label() {
        Some(label) => writeln!(out, "{GRAPH_MAGIC} {label}")?,
        None => writeln!(out, "{GRAPH_MAGIC}")?,
    }
    writeln!(out, "{} {}", g.n(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn graph_to_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_graph(g, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

pub fn read_graph<R: BufRead>(input: R) -> Result<Graph> {
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty file"))?;
    let header = header?;
    let label = match header.strip_prefix(GRAPH_MAGIC) {
        Some("") => None,
        Some(rest) => match rest.strip_prefix(' ') {
            Some(l) if !l.is_empty() => Some(l.to_string()),
            Some(_) => None,
            None => return Err(Error::parse(1, "expected `#blowup-lab-graph v1 <label>`")),
        },
        None => return Err(Error::parse(1, "expected `#blowup-lab-graph v1 <label>`")),
    };
    let (_, sizes) = lines.next().ok_or_else(|| Error::parse(2, "missing `<n> <m>` line"))?;
    let sizes = sizes?;
    let (n, m) = parse_pair(&sizes).ok_or_else(|| Error::parse(2, format!("expected `<n> <m>`, got {sizes:?}")))?;

    let mut b = GraphBuilder::new(n);
    let mut previous: Option<(usize, usize)> = None;
    let mut seen = 0usize;
    for (line_no, line) in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let (u, v) =
            parse_pair(&line).ok_or_else(|| Error::parse(line_no, format!("expected `<u> <v>`, got {line:?}")))?;
        if u == v {
            return Err(Error::parse(line_no, format!("self-loop at vertex {u}")));
        }
        if u >= n || v >= n {
            return Err(Error::parse(line_no, format!("endpoint outside 0..{n}")));
        }
        if u > v {
            return Err(Error::parse(line_no, format!("edge must be written with u < v, got {u} {v}")));
        }
        if previous.is_some_and(|p| p >= (u, v)) {
            return Err(Error::parse(line_no, "edges must be strictly ascending"));
        }
        previous = Some((u, v));
        seen += 1;
        if seen > m {
            return Err(Error::parse(line_no, format!("header declares {m} edges but more are listed")));
        }
        b.add_edge(u, v);
    }
    if seen != m {
        return Err(Error::parse(2, format!("header declares {m} edges but the file lists {seen}")));
    }
    Ok(b.finish(label))
}

fn parse_pair(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split(' ');
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    it.next().is_none().then_some((a, b))
}

pub fn save_graph(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let file = fs::File::create(path)?;
    write_graph(g, std::io::BufWriter::new(file))
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<Graph> {
    let file = fs::File::open(path)?;
    read_graph(std::io::BufReader::new(file))
}

pub fn write_set<W: Write>(set: &ApFreeSet, mut out: W) -> Result<()> {
    writeln!(out, "{SET_MAGIC} {} {}", set.universe_n(), set.method())?;
    let elems: Vec<String> = set.elements().iter().map(|x| x.to_string()).collect();
    writeln!(out, "{}", elems.join(" "))?;
    out.flush()?;
    Ok(())
}

pub fn read_set<R: BufRead>(input: R) -> Result<ApFreeSet> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| Error::parse(1, "empty file"))??;
    let rest = header
        .strip_prefix(SET_MAGIC)
        .and_then(|r| r.strip_prefix(' '))
        .ok_or_else(|| Error::parse(1, "expected `#apfree v1 <n> <method>`"))?;
    let (n, method) = rest.split_once(' ').ok_or_else(|| Error::parse(1, "expected `#apfree v1 <n> <method>`"))?;
    let n: u64 = n.parse().map_err(|_| Error::parse(1, format!("bad universe size {n:?}")))?;
    let method: ApMethod = method.parse().map_err(|e: Error| Error::parse(1, e.to_string()))?;
    let body = lines.next().transpose()?.unwrap_or_default();
    let elements = body
        .split(' ')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().map_err(|_| Error::parse(2, format!("bad element {s:?}"))))
        .collect::<Result<Vec<_>>>()?;
    ApFreeSet::new(n, elements, method).map_err(|e| Error::parse(2, e.to_string()))
}

pub fn save_set(set: &ApFreeSet, path: impl AsRef<Path>) -> Result<()> {
    write_set(set, std::io::BufWriter::new(fs::File::create(path)?))
}

pub fn load_set(path: impl AsRef<Path>) -> Result<ApFreeSet> {
    read_set(std::io::BufReader::new(fs::File::open(path)?))
}

/// Writes the certificate JSON; `set_file` is recorded as given.
pub fn save_certificate(cert: &RsCertificate, set_file: &str, path: impl AsRef<Path>) -> Result<()> {
    let json = serde_json::to_string(&cert.to_file(set_file))?;
    fs::write(path, json + "\n")?;
    Ok(())
}

/// Loads a certificate; a relative `set_file` resolves against the
/// certificate's directory. The triangles are re-derived and compared.
pub fn load_certificate(path: impl AsRef<Path>) -> Result<RsCertificate> {
    let path = path.as_ref();
    let file: RsCertificateFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    let set_path = Path::new(&file.set_file);
    let set_path = if set_path.is_relative() {
        path.parent().unwrap_or(Path::new(".")).join(set_path)
    } else {
        set_path.to_path_buf()
    };
    let set = load_set(set_path)?;
    RsCertificate::from_file(&file, set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{behrend_set, rs_graph};
    use crate::graph::random_graph;
    use proptest::prelude::*;

    #[test]
    fn triangle_roundtrip() {
        let g = Graph::complete(3);
        let text = graph_to_string(&g);
        assert_eq!(text, "#blowup-lab-graph v1 complete(n=3)\n3 3\n0 1\n0 2\n1 2\n");
        assert_eq!(read_graph(text.as_bytes()).unwrap(), g);
    }

    #[test]
    fn unlabelled_roundtrip() {
        let g = Graph::from_edge_list(4, &[(2, 3)]).unwrap();
        let text = graph_to_string(&g);
        assert_eq!(text, "#blowup-lab-graph v1\n4 1\n2 3\n");
        assert_eq!(read_graph(text.as_bytes()).unwrap(), g);
    }

    #[test]
    fn self_loop_reports_line() {
        let text = "#blowup-lab-graph v1\n6 2\n0 1\n5 5\n";
        match read_graph(text.as_bytes()) {
            Err(Error::Parse { line, reason }) => {
                assert_eq!(line, 4);
                assert!(reason.contains("self-loop"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn edge_count_mismatch() {
        let text = "#blowup-lab-graph v1\n3 3\n0 1\n1 2\n";
        assert!(matches!(read_graph(text.as_bytes()), Err(Error::Parse { line: 2, .. })));
        let text = "#blowup-lab-graph v1\n3 1\n0 1\n1 2\n";
        assert!(matches!(read_graph(text.as_bytes()), Err(Error::Parse { line: 4, .. })));
    }

    #[test]
    fn rejects_disorder_and_junk() {
        for text in [
            "#blowup-lab-graph v1\n3 2\n1 2\n0 1\n",
            "#blowup-lab-graph v1\n3 1\n2 1\n",
            "#blowup-lab-graph v1\n3 1\n0 7\n",
            "#blowup-lab-graph v2\n3 0\n",
            "#blowup-lab-graph v1\n3\n",
            "#blowup-lab-graph v1\n3 1\n0 1 2\n",
        ] {
            assert!(matches!(read_graph(text.as_bytes()), Err(Error::Parse { .. })), "{text:?}");
        }
    }

    #[test]
    fn set_roundtrip() {
        let s = behrend_set(50).unwrap();
        let mut buf = Vec::new();
        write_set(&s, &mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("#apfree v1 50 behrend\n"));
        assert_eq!(read_set(buf.as_slice()).unwrap(), s);
        assert!(read_set("#apfree v1 5 explicit\n1 2 3\n".as_bytes()).is_err());
    }

    #[test]
    fn certificate_roundtrip() {
        let dir = std::env::temp_dir().join(format!("blowup-cert-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let set = behrend_set(12).unwrap();
        let (_, cert) = rs_graph(12, &set).unwrap();
        save_set(&set, dir.join("s.txt")).unwrap();
        save_certificate(&cert, "s.txt", dir.join("c.json")).unwrap();
        let back = load_certificate(dir.join("c.json")).unwrap();
        assert_eq!(back.triangles, cert.triangles);
        fs::remove_dir_all(&dir).unwrap();
    }

    proptest! {
        #[test]
        fn graph_roundtrip_is_exact(n in 0usize..40, p in 0.0f64..=1.0, seed in any::<u64>()) {
            let g = random_graph(n, p, seed).unwrap();
            let text = graph_to_string(&g);
            let back = read_graph(text.as_bytes()).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(graph_to_string(&back), text);
        }
    }
}
