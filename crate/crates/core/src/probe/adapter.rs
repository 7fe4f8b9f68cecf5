//! Newline-delimited JSON over TCP or a child's standard streams.
//!
//! Request: `{"id": ..., "context": ..., "question": ...}`.
//! Response: `{"id": ..., "answer": ...}`, one line per request, same id.

use std::fmt;
use std::io::{self, BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream, ToSocketAddrs};
use std::process::{Child, Command, Stdio};
use std::str::FromStr;
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{Answer, ProbeCase, ProbeError, ProbeResponse};
use crate::lang::{parse_model_string, text_tokens, Polarity, Quantifier, Sentence, Vocabulary};
use crate::semantics::{evaluate, TruthVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeRequest {
    pub id: String,
    pub context: String,
    pub question: String,
}

impl From<&ProbeCase> for ProbeRequest {
    fn from(c: &ProbeCase) -> Self {
        ProbeRequest {
            id: c.id.clone(),
            context: c.context.clone(),
            question: c.question.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireResponse {
    pub id: String,
    pub answer: String,
}

/// Built-in answerers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StubKind {
    /// Model checks the whole context.
    Oracle,
    /// Model checks only the first `k` literals.
    Window(usize),
    /// Decides from token counts alone.
    BagOfWords,
    AlwaysYes,
}

impl FromStr for StubKind {
    type Err = ProbeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_lowercase().replace('-', "_");
        match t.as_str() {
            "oracle" => Ok(StubKind::Oracle),
            "bag_of_words" | "bag" => Ok(StubKind::BagOfWords),
            "always_yes" => Ok(StubKind::AlwaysYes),
            _ => t
                .strip_prefix("window_")
                .or_else(|| t.strip_prefix("window:"))
                .and_then(|k| k.parse().ok())
                .map(StubKind::Window)
                .ok_or_else(|| ProbeError::InvalidEndpoint(format!("unknown stub `{s}`"))),
        }
    }
}

impl fmt::Display for StubKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StubKind::Oracle => f.write_str("oracle"),
            StubKind::Window(k) => write!(f, "window_{k}"),
            StubKind::BagOfWords => f.write_str("bag_of_words"),
            StubKind::AlwaysYes => f.write_str("always_yes"),
        }
    }
}

fn verdict_word(v: TruthVerdict) -> &'static str {
    match v {
        TruthVerdict::True => "yes",
        TruthVerdict::False => "no",
        TruthVerdict::Undetermined => "unknown",
    }
}

fn flip(answer: &'static str) -> &'static str {
    match answer {
        "yes" => "no",
        "no" => "yes",
        other => other,
    }
}

/// Counts-only rule for `∀P` / `∃P`: tokens of `P`, tokens of predicates
/// excluded by `P`, `not` and `is` (one per literal). Negated predicates
/// are answered through the dual quantifier.
fn bag_answer(req: &ProbeRequest, phi: &Sentence, vocab: &Vocabulary) -> &'static str {
    let tokens = text_tokens(&req.context);
    let count = |pred: &dyn Fn(&str) -> bool| tokens.iter().filter(|t| pred(t)).count();
    let p = phi.predicate.as_str();
    let hits = count(&|t| t == p);
    let nots = count(&|t| t == "not");
    let rivals = count(&|t| vocab.excludes(p, t));
    let literals = count(&|t| t == "is");
    let forall = || {
        if rivals + nots > 0 {
            "no"
        } else if hits == literals {
            "yes"
        } else {
            "unknown"
        }
    };
    let exists = || {
        if hits > nots {
            "yes"
        } else if rivals + nots >= literals {
            "no"
        } else {
            "unknown"
        }
    };
    match (phi.quantifier, phi.polarity) {
        (Quantifier::Forall, Polarity::Positive) => forall(),
        (Quantifier::Exists, Polarity::Positive) => exists(),
        (Quantifier::Forall, Polarity::Negative) => flip(exists()),
        (Quantifier::Exists, Polarity::Negative) => flip(forall()),
    }
}

/// The answer a built-in stub gives. Requests that do not parse get
/// `unknown`.
pub fn stub_answer(kind: StubKind, vocab: &Vocabulary, req: &ProbeRequest) -> String {
    if kind == StubKind::AlwaysYes {
        return "yes".into();
    }
    let Ok(phi) = Sentence::parse(&req.question, vocab) else {
        return "unknown".into();
    };
    if kind == StubKind::BagOfWords {
        return bag_answer(req, &phi, vocab).into();
    }
    let Ok(d) = parse_model_string(&req.context, vocab) else {
        return "unknown".into();
    };
    let d = match kind {
        StubKind::Window(k) => d.truncate_to(k),
        _ => d,
    };
    match evaluate(&d, &phi, vocab) {
        Ok(v) => verdict_word(v).into(),
        Err(_) => "unknown".into(),
    }
}

/// Where answers come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Endpoint {
    /// In-process stub.
    Builtin { kind: StubKind, vocab: Vocabulary },
    /// `tcp://host:port`.
    Tcp(String),
    /// `cmd:program args...`, spoken to over stdin/stdout.
    Command(Vec<String>),
}

impl Endpoint {
    /// `builtin:KIND`, `tcp://ADDR` or `cmd:PROGRAM ARGS...`. Built-in stubs
    /// check contexts against `vocab`.
    pub fn parse(text: &str, vocab: &Vocabulary) -> Result<Self, ProbeError> {
        let t = text.trim();
        if let Some(kind) = t.strip_prefix("builtin:") {
            return Ok(builtin_stub(kind.parse()?, vocab.clone()));
        }
        if let Some(addr) = t.strip_prefix("tcp://") {
            if addr.is_empty() {
                return Err(ProbeError::InvalidEndpoint(text.into()));
            }
            return Ok(Endpoint::Tcp(addr.to_string()));
        }
        if let Some(cmd) = t.strip_prefix("cmd:") {
            let argv: Vec<String> = cmd.split_whitespace().map(String::from).collect();
            if argv.is_empty() {
                return Err(ProbeError::InvalidEndpoint(text.into()));
            }
            return Ok(Endpoint::Command(argv));
        }
        Err(ProbeError::InvalidEndpoint(text.into()))
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Builtin { kind, .. } => write!(f, "builtin:{kind}"),
            Endpoint::Tcp(a) => write!(f, "tcp://{a}"),
            Endpoint::Command(argv) => write!(f, "cmd:{}", argv.join(" ")),
        }
    }
}

pub fn builtin_stub(kind: StubKind, vocab: Vocabulary) -> Endpoint {
    Endpoint::Builtin { kind, vocab }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdapterConfig {
    /// Per-request wait for a response line, also the connect timeout.
    pub timeout: Duration,
    /// Extra attempts after the first.
    pub retries: u32,
    /// Workers, each with its own connection.
    pub concurrency: usize,
}

impl Default for AdapterConfig {
    fn default() -> Self {
        AdapterConfig {
            timeout: Duration::from_secs(10),
            retries: 2,
            concurrency: 4,
        }
    }
}

struct Conn {
    writer: Box<dyn Write + Send>,
    lines: mpsc::Receiver<io::Result<String>>,
    child: Option<Child>,
}

impl Drop for Conn {
    fn drop(&mut self) {
        if let Some(c) = self.child.as_mut() {
            let _ = c.kill();
            let _ = c.wait();
        }
    }
}

fn pump(reader: impl io::Read + Send + 'static) -> mpsc::Receiver<io::Result<String>> {
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        let mut r = BufReader::new(reader);
        loop {
            let mut line = String::new();
            match r.read_line(&mut line) {
                Ok(0) => {
                    let _ = tx.send(Err(io::Error::new(io::ErrorKind::UnexpectedEof, "connection closed")));
                    return;
                }
                Ok(_) => {
                    if tx.send(Ok(line)).is_err() {
                        return;
                    }
                }
                Err(e) => {
                    let _ = tx.send(Err(e));
                    return;
                }
            }
        }
    });
    rx
}

fn connect(endpoint: &Endpoint, timeout: Duration) -> io::Result<Conn> {
    match endpoint {
        Endpoint::Tcp(addr) => {
            let mut last = io::Error::new(io::ErrorKind::NotFound, format!("no address for `{addr}`"));
            for a in addr.to_socket_addrs()? {
                match TcpStream::connect_timeout(&a, timeout) {
                    Ok(s) => {
                        let reader = s.try_clone()?;
                        return Ok(Conn {
                            writer: Box::new(s),
                            lines: pump(reader),
                            child: None,
                        });
                    }
                    Err(e) => last = e,
                }
            }
            Err(last)
        }
        Endpoint::Command(argv) => {
            let mut child = Command::new(&argv[0])
                .args(&argv[1..])
                .stdin(Stdio::piped())
                .stdout(Stdio::piped())
                .stderr(Stdio::null())
                .spawn()?;
            let stdin = child.stdin.take().expect("piped stdin");
            let stdout = child.stdout.take().expect("piped stdout");
            Ok(Conn {
                writer: Box::new(stdin),
                lines: pump(stdout),
                child: Some(child),
            })
        }
        Endpoint::Builtin { .. } => unreachable!("built-in stubs need no connection"),
    }
}

fn worker(endpoint: &Endpoint, cfg: &AdapterConfig, cases: &[(usize, &ProbeCase)]) -> Result<Vec<(usize, ProbeResponse)>, ProbeError> {
    let mut conn: Option<Conn> = None;
    let mut ever_connected = false;
    let mut out = Vec::with_capacity(cases.len());
    for &(idx, case) in cases {
        let line = serde_json::to_string(&ProbeRequest::from(case)).expect("serializable request") + "\n";
        let mut answer = None;
        let mut last_error = String::new();
        for _ in 0..=cfg.retries {
            if conn.is_none() {
                match connect(endpoint, cfg.timeout) {
                    Ok(c) => {
                        conn = Some(c);
                        ever_connected = true;
                    }
                    Err(e) => {
                        last_error = e.to_string();
                        continue;
                    }
                }
            }
            let c = conn.as_mut().expect("connected");
            if let Err(e) = c.writer.write_all(line.as_bytes()).and_then(|_| c.writer.flush()) {
                last_error = e.to_string();
                conn = None;
                continue;
            }
            match c.lines.recv_timeout(cfg.timeout) {
                Ok(Ok(reply)) => {
                    let r: WireResponse = serde_json::from_str(reply.trim_end())
                        .map_err(|e| ProbeError::ProtocolViolation(format!("{e} in `{}`", reply.trim_end())))?;
                    if r.id != case.id {
                        return Err(ProbeError::ProtocolViolation(format!(
                            "response id `{}` for request `{}`",
                            r.id, case.id
                        )));
                    }
                    answer = Some(r.answer);
                    break;
                }
                Ok(Err(e)) => last_error = e.to_string(),
                Err(_) => last_error = "timed out".into(),
            }
            conn = None;
        }
        match answer {
            Some(a) => out.push((idx, ProbeResponse::new(&case.id, a))),
            None if !ever_connected => {
                return Err(ProbeError::AdapterUnreachable {
                    endpoint: endpoint.to_string(),
                    attempts: cfg.retries + 1,
                    message: last_error,
                })
            }
            None => out.push((
                idx,
                ProbeResponse {
                    id: case.id.clone(),
                    raw: String::new(),
                    normalized: Answer::Unparseable,
                },
            )),
        }
    }
    Ok(out)
}

/// One response per case, in case order. Cases are split round-robin over
/// up to `concurrency` workers. A request that keeps failing after the
/// retries is recorded as unparseable; an endpoint that never accepts a
/// connection is an error.
pub fn run_adapter(cases: &[ProbeCase], endpoint: &Endpoint, cfg: &AdapterConfig) -> Result<Vec<ProbeResponse>, ProbeError> {
    if let Endpoint::Builtin { kind, vocab } = endpoint {
        return Ok(cases
            .iter()
            .map(|c| ProbeResponse::new(&c.id, stub_answer(*kind, vocab, &ProbeRequest::from(c))))
            .collect());
    }
    let workers = cfg.concurrency.clamp(1, cases.len().max(1));
    let mut shards: Vec<Vec<(usize, &ProbeCase)>> = vec![Vec::new(); workers];
    for (i, c) in cases.iter().enumerate() {
        shards[i % workers].push((i, c));
    }
    let results: Vec<Result<Vec<(usize, ProbeResponse)>, ProbeError>> = thread::scope(|s| {
        let handles: Vec<_> = shards.iter().map(|shard| s.spawn(|| worker(endpoint, cfg, shard))).collect();
        handles.into_iter().map(|h| h.join().expect("adapter worker panicked")).collect()
    });
    let mut slots: Vec<Option<ProbeResponse>> = vec![None; cases.len()];
    for r in results {
        for (i, resp) in r? {
            slots[i] = Some(resp);
        }
    }
    Ok(slots.into_iter().map(|r| r.expect("every case answered")).collect())
}

/// Answers requests from `input` on `output` until end of input. Returns
/// the number of requests served.
pub fn serve_stdio(kind: StubKind, vocab: &Vocabulary, input: impl BufRead, mut output: impl Write) -> Result<usize, ProbeError> {
    let mut served = 0;
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let req: ProbeRequest =
            serde_json::from_str(&line).map_err(|e| ProbeError::ProtocolViolation(format!("{e} in `{line}`")))?;
        let resp = WireResponse {
            answer: stub_answer(kind, vocab, &req),
            id: req.id,
        };
        writeln!(output, "{}", serde_json::to_string(&resp).expect("serializable response"))?;
        output.flush()?;
        served += 1;
    }
    Ok(served)
}

/// Serves each accepted connection on its own thread. Stops accepting
/// after `max_connections` when given.
pub fn serve_tcp(kind: StubKind, vocab: &Vocabulary, listener: TcpListener, max_connections: Option<usize>) -> Result<(), ProbeError> {
    let mut handles = Vec::new();
    for (n, stream) in listener.incoming().enumerate() {
        let stream = stream?;
        let vocab = vocab.clone();
        handles.push(thread::spawn(move || {
            let reader = match stream.try_clone() {
                Ok(r) => BufReader::new(r),
                Err(_) => return,
            };
            let _ = serve_stdio(kind, &vocab, reader, stream);
        }));
        if max_connections.is_some_and(|m| n + 1 >= m) {
            break;
        }
    }
    for h in handles {
        let _ = h.join();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{permute, TokenString};
    use crate::probe::{generate_dataset, score, DatasetSpec, Scheme};

    fn everyday() -> Vocabulary {
        Vocabulary::everyday()
    }

    fn req(context: &str) -> ProbeRequest {
        ProbeRequest {
            id: "x".into(),
            context: context.into(),
            question: "Is everything blue?".into(),
        }
    }

    #[test]
    fn stub_kinds_parse() {
        assert_eq!("window_2".parse::<StubKind>().unwrap(), StubKind::Window(2));
        assert_eq!("window:3".parse::<StubKind>().unwrap(), StubKind::Window(3));
        assert_eq!("bag-of-words".parse::<StubKind>().unwrap(), StubKind::BagOfWords);
        assert!("window_x".parse::<StubKind>().is_err());
        assert_eq!(StubKind::Window(2).to_string(), "window_2");
    }

    #[test]
    fn endpoints_parse() {
        let v = everyday();
        assert_eq!(Endpoint::parse("tcp://127.0.0.1:9", &v).unwrap(), Endpoint::Tcp("127.0.0.1:9".into()));
        assert_eq!(
            Endpoint::parse("cmd:python3 model.py", &v).unwrap(),
            Endpoint::Command(vec!["python3".into(), "model.py".into()])
        );
        assert_eq!(Endpoint::parse("builtin:oracle", &v).unwrap().to_string(), "builtin:oracle");
        assert!(Endpoint::parse("http://x", &v).is_err());
        assert!(Endpoint::parse("cmd:", &v).is_err());
    }

    #[test]
    fn stub_answers() {
        let v = everyday();
        let consistent = req("The car is blue. The house is blue.");
        let first_bad = req("The car is red. The house is blue. The shirt is blue.");
        let last_bad = req("The car is blue. The house is blue. The shirt is blue. The table is blue. The cup is green.");
        assert_eq!(stub_answer(StubKind::Oracle, &v, &consistent), "yes");
        assert_eq!(stub_answer(StubKind::Window(2), &v, &first_bad), "no");
        assert_eq!(stub_answer(StubKind::Window(2), &v, &last_bad), "yes");
        assert_eq!(stub_answer(StubKind::Oracle, &v, &last_bad), "no");
        assert_eq!(stub_answer(StubKind::BagOfWords, &v, &last_bad), "no");
        assert_eq!(stub_answer(StubKind::BagOfWords, &v, &consistent), "yes");
        assert_eq!(stub_answer(StubKind::AlwaysYes, &v, &last_bad), "yes");
        assert_eq!(stub_answer(StubKind::Oracle, &v, &req("gibberish")), "unknown");
    }

    #[test]
    fn bag_ignores_token_order() {
        let v = everyday();
        let r = req("The car is blue. The house is not blue.");
        let tokens = TokenString::new(r.context.split_whitespace());
        let n = tokens.len();
        let reversed: Vec<usize> = (0..n).rev().collect();
        let shuffled = permute(&tokens, &reversed).unwrap();
        let moved = req(&shuffled.to_string());
        assert_eq!(stub_answer(StubKind::BagOfWords, &v, &r), stub_answer(StubKind::BagOfWords, &v, &moved));
    }

    #[test]
    fn builtin_window_scores() {
        let v = everyday();
        let spec = DatasetSpec {
            sizes: 5..=5,
            scheme: Scheme::FullPositions,
            ..DatasetSpec::default()
        };
        let cases = generate_dataset(&spec, &v).unwrap();
        let resp = run_adapter(&cases, &builtin_stub(StubKind::Window(2), v), &AdapterConfig::default()).unwrap();
        let last = cases.iter().position(|c| c.inconsistency_position == Some(5)).unwrap();
        assert_eq!(resp[last].normalized, Answer::Yes);
        let r = score(&cases, &resp).unwrap();
        assert_eq!((r.rows[0].passed, r.rows[0].total), (2, 5));
    }

    #[test]
    fn tcp_round_trip() {
        let v = everyday();
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        let sv = v.clone();
        thread::spawn(move || serve_tcp(StubKind::Oracle, &sv, listener, None));
        let cases = generate_dataset(&DatasetSpec::default(), &v).unwrap();
        let ep = Endpoint::Tcp(addr.to_string());
        let resp = run_adapter(&cases, &ep, &AdapterConfig::default()).unwrap();
        assert_eq!(resp.len(), cases.len());
        assert!(resp.iter().zip(&cases).all(|(r, c)| r.id == c.id && r.normalized.matches(c.gold)));
    }

    #[test]
    fn unreachable_endpoint() {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        drop(listener);
        let cases = generate_dataset(&DatasetSpec::default(), &everyday()).unwrap();
        let cfg = AdapterConfig {
            timeout: Duration::from_millis(200),
            retries: 1,
            concurrency: 2,
        };
        match run_adapter(&cases[..2], &Endpoint::Tcp(addr.to_string()), &cfg) {
            Err(ProbeError::AdapterUnreachable { attempts, .. }) => assert_eq!(attempts, 2),
            other => panic!("expected unreachable, got {other:?}"),
        }
    }

    #[test]
    fn protocol_violations() {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        thread::spawn(move || {
            for s in listener.incoming() {
                let mut s = s.unwrap();
                let mut r = BufReader::new(s.try_clone().unwrap());
                let mut line = String::new();
                while r.read_line(&mut line).unwrap_or(0) > 0 {
                    let _ = s.write_all(b"{\"id\":\"someone-else\",\"answer\":\"yes\"}\n");
                    line.clear();
                }
            }
        });
        let cases = generate_dataset(&DatasetSpec::default(), &everyday()).unwrap();
        assert!(matches!(
            run_adapter(&cases[..1], &Endpoint::Tcp(addr.to_string()), &AdapterConfig::default()),
            Err(ProbeError::ProtocolViolation(_))
        ));
    }

    #[test]
    fn silent_endpoint_gives_unparseable() {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        thread::spawn(move || {
            let mut held = Vec::new();
            for s in listener.incoming() {
                held.push(s);
            }
        });
        let cases = generate_dataset(&DatasetSpec::default(), &everyday()).unwrap();
        let cfg = AdapterConfig {
            timeout: Duration::from_millis(100),
            retries: 1,
            concurrency: 1,
        };
        let resp = run_adapter(&cases[..2], &Endpoint::Tcp(addr.to_string()), &cfg).unwrap();
        assert!(resp.iter().all(|r| r.normalized == Answer::Unparseable && r.raw.is_empty()));
    }

    #[test]
    fn stdio_serving() {
        let v = everyday();
        let input = "{\"id\":\"a\",\"context\":\"The car is blue.\",\"question\":\"Is everything blue?\"}\n\n";
        let mut out = Vec::new();
        assert_eq!(serve_stdio(StubKind::Oracle, &v, input.as_bytes(), &mut out).unwrap(), 1);
        assert_eq!(String::from_utf8(out).unwrap(), "{\"id\":\"a\",\"answer\":\"yes\"}\n");
        assert!(serve_stdio(StubKind::Oracle, &v, "nope\n".as_bytes(), Vec::new()).is_err());
    }
}
