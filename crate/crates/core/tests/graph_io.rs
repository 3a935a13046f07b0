use std::io::Write;

use netei_core::graph::{load_edge_list, write_edge_list};
use netei_core::{Error, Graph};

#[test]
fn snap_style_file_is_cleaned() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "# comment\n0 1\n0 1\n1 1\n").unwrap();
    let loaded = load_edge_list(f.path()).unwrap();
    assert_eq!(loaded.graph.node_count(), 2);
    assert_eq!(loaded.graph.edge_count(), 1);
    assert_eq!(loaded.report.duplicates, 1);
    assert_eq!(loaded.report.self_loops, 1);
}

#[test]
fn sparse_ids_survive_a_round_trip() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "100 7\n7 3000000000\n# tail\n\n100 3000000000\n").unwrap();
    let loaded = load_edge_list(f.path()).unwrap();
    assert_eq!(loaded.original_ids, vec![7, 100, 3_000_000_000]);
    assert_eq!(loaded.graph.edge_count(), 3);

    let out = tempfile::NamedTempFile::new().unwrap();
    write_edge_list(&loaded.graph, std::fs::File::create(out.path()).unwrap()).unwrap();
    let again = load_edge_list(out.path()).unwrap();
    assert_eq!(again.graph, loaded.graph);
}

#[test]
fn malformed_and_missing_files() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "0 1\n2 x\n").unwrap();
    assert!(matches!(load_edge_list(f.path()), Err(Error::MalformedLine { line: 2, .. })));
    assert!(matches!(load_edge_list("/nonexistent/edges.txt"), Err(Error::Io { .. })));
}

#[test]
fn written_graph_reloads_identically() {
    let (g, _) = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
    let mut buf = Vec::new();
    write_edge_list(&g, &mut buf).unwrap();
    let loaded = netei_core::graph::parse_edge_list(buf.as_slice()).unwrap();
    // Node 4 is isolated and disappears from an edge list.
    assert_eq!(loaded.graph.node_count(), 4);
    assert_eq!(loaded.graph.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
}
