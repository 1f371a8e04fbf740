//! Starts the HTTP service on an ephemeral port, sends a few requests, and shuts down.
//! `pilotsize serve --port 8080` runs the same service in the foreground.

use std::io::{Read, Write};
use std::net::TcpStream;

use pilotsize::service::serve_on;

fn request(addr: std::net::SocketAddr, method: &str, path: &str, body: &str) -> std::io::Result<String> {
    let mut stream = TcpStream::connect(addr)?;
    write!(
        stream,
        "{method} {path} HTTP/1.1\r\nHost: localhost\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    )?;
    let mut response = String::new();
    stream.read_to_string(&mut response)?;
    Ok(response.split("\r\n\r\n").nth(1).unwrap_or_default().to_string())
}

fn main() -> std::io::Result<()> {
    let runtime = tokio::runtime::Runtime::new()?;
    let listener = runtime.block_on(tokio::net::TcpListener::bind("127.0.0.1:0"))?;
    let addr = listener.local_addr()?;
    let (stop, stopped) = tokio::sync::oneshot::channel::<()>();
    let server = runtime.spawn(async move {
        serve_on(listener, &[], async {
            let _ = stopped.await;
        })
        .await
    });

    println!("{}", request(addr, "POST", "/api/v1/design", r#"{"estimand":"mean","confidence":0.95,"delta":0.2}"#)?);
    println!("{}", request(addr, "POST", "/api/v1/ci", r#"{"estimand":"correlation","r":0.3,"n":20}"#)?);
    println!("{}", request(addr, "POST", "/api/v1/design", r#"{"estimand":"proportion","p":1.2}"#)?);
    println!("{}", request(addr, "GET", "/healthz", "")?);

    let _ = stop.send(());
    runtime.block_on(server).expect("server task")?;
    Ok(())
}
