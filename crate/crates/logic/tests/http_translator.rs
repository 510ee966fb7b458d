//! HTTP translator against a local one-shot server.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::thread;
use std::time::Duration;

use satrl_logic::{HttpTranslator, TranslateError, TranslationRequest, TranslatorClient};

/// Serves one request with `status` and `body`, returning the received request body.
fn serve_once(status: &'static str, body: &'static str) -> (String, thread::JoinHandle<(String, String)>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/translate", listener.local_addr().unwrap());
    let handle = thread::spawn(move || {
        let (stream, _) = listener.accept().unwrap();
        let mut reader = BufReader::new(stream.try_clone().unwrap());
        let mut len = 0;
        let mut auth = String::new();
        loop {
            let mut line = String::new();
            reader.read_line(&mut line).unwrap();
            let lower = line.to_ascii_lowercase();
            if let Some(v) = lower.strip_prefix("content-length:") {
                len = v.trim().parse().unwrap();
            }
            if lower.starts_with("authorization:") {
                auth = line["authorization:".len()..].trim().to_string();
            }
            if line == "\r\n" {
                break;
            }
        }
        let mut req = vec![0; len];
        reader.read_exact(&mut req).unwrap();
        let mut out = stream;
        write!(
            out,
            "HTTP/1.1 {status}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
            body.len()
        )
        .unwrap();
        (String::from_utf8(req).unwrap(), auth)
    });
    (url, handle)
}

fn request() -> TranslationRequest {
    TranslationRequest {
        sentence: "The circus has a Ferris wheel or a rollercoaster.".into(),
        session_id: "s1".into(),
        instruction_template: "functional-prefix-v1".into(),
    }
}

#[test]
fn successful_round_trip() {
    let (url, server) = serve_once(
        "200 OK",
        r#"{"expression": "Or(P, Q)", "glossary": {"P": "a Ferris wheel", "Q": "a rollercoaster"}}"#,
    );
    let client = HttpTranslator::new(url, "test-model", Some("secret".into()), Duration::from_secs(5));
    let resp = client.translate(&request()).unwrap();
    assert_eq!(resp.expression, "Or(P, Q)");
    assert_eq!(resp.glossary.len(), 2);
    let (sent, auth) = server.join().unwrap();
    let json: serde_json::Value = serde_json::from_str(&sent).unwrap();
    assert_eq!(json["session_id"], "s1");
    assert_eq!(json["model"], "test-model");
    assert_eq!(json["instruction_template"], "functional-prefix-v1");
    assert_eq!(auth, "Bearer secret");
}

#[test]
fn garbage_reply_is_malformed_with_raw_text() {
    let (url, server) = serve_once("200 OK", "not json");
    let client = HttpTranslator::new(url, "m", None, Duration::from_secs(5));
    match client.translate(&request()) {
        Err(TranslateError::MalformedTranslation { raw, .. }) => assert_eq!(raw, "not json"),
        other => panic!("unexpected {other:?}"),
    }
    server.join().unwrap();
}

#[test]
fn auth_failure_and_refused_connection_are_unavailable() {
    let (url, server) = serve_once("401 Unauthorized", "{}");
    let client = HttpTranslator::new(url, "m", None, Duration::from_secs(5));
    assert!(matches!(
        client.translate(&request()),
        Err(TranslateError::TranslatorUnavailable(_))
    ));
    server.join().unwrap();

    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let client = HttpTranslator::new(format!("http://127.0.0.1:{port}/"), "m", None, Duration::from_secs(2));
    assert!(matches!(
        client.translate(&request()),
        Err(TranslateError::TranslatorUnavailable(_))
    ));
}
