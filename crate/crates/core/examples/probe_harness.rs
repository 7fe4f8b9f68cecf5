// Generates the consistency dataset, serves a stub over TCP, probes it and
// renders the report.
//
// `cargo run --example probe_harness`

use std::net::TcpListener;
use std::thread;

use quantlab::lang::Vocabulary;
use quantlab::probe::{
    generate_dataset, render_table, run_adapter, score, serve_tcp, AdapterConfig, DatasetSpec, Endpoint, Scheme, StubKind,
};

pub fn run_example() -> String {
    let vocab = Vocabulary::everyday();
    let spec = DatasetSpec {
        scheme: Scheme::FullPositions,
        ..DatasetSpec::default()
    };
    let cases = generate_dataset(&spec, &vocab).unwrap();

    // any process speaking the NDJSON protocol would do here
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let endpoint = Endpoint::Tcp(listener.local_addr().unwrap().to_string());
    let served = vocab.clone();
    thread::spawn(move || serve_tcp(StubKind::Window(2), &served, listener, None));

    let responses = run_adapter(&cases, &endpoint, &AdapterConfig::default()).unwrap();
    let report = score(&cases, &responses).unwrap();
    format!("{} cases, window_2 stub\n{}", cases.len(), render_table(&report))
}

fn main() {
    print!("{}", run_example());
}
