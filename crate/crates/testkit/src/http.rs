//! A minimal HTTP server for exercising download code.

use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::sync::{Arc, Mutex};
use std::thread;

pub type Handler = dyn Fn(&str, usize) -> (u16, String) + Send + Sync;

/// Minimal HTTP server: `handler(path, nth request for that path)` gives status and body.
pub struct MockServer {
    pub url: String,
    log: Arc<Mutex<Vec<String>>>,
}

impl MockServer {
    pub fn start(handler: Box<Handler>) -> MockServer {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let url = format!("http://{}", listener.local_addr().unwrap());
        let log = Arc::new(Mutex::new(Vec::new()));
        let seen = log.clone();
        thread::spawn(move || {
            for stream in listener.incoming() {
                let Ok(mut stream) = stream else { continue };
                let mut reader = BufReader::new(stream.try_clone().unwrap());
                let mut request_line = String::new();
                reader.read_line(&mut request_line).unwrap();
                loop {
                    let mut header = String::new();
                    if reader.read_line(&mut header).unwrap() == 0 || header == "\r\n" {
                        break;
                    }
                }
                let path = request_line
                    .split_whitespace()
                    .nth(1)
                    .unwrap_or("/")
                    .to_string();
                let nth = {
                    let mut log = seen.lock().unwrap();
                    log.push(path.clone());
                    log.iter().filter(|p| **p == path).count()
                };
                let (status, body) = handler(&path, nth);
                let _ = write!(
                    stream,
                    "HTTP/1.1 {status} X\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                    body.len()
                );
            }
        });
        MockServer { url, log }
    }

    pub fn requests(&self) -> Vec<String> {
        self.log.lock().unwrap().clone()
    }
}
