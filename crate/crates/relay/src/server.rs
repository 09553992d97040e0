//! HTTP front end: `/ws` for the session protocol, `/` for the viewer bundle.

use std::future::Future;
use std::io;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::time::Duration;

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::{Html, IntoResponse};
use axum::routing::get;
use axum::Router;
use futures::{SinkExt, StreamExt};
use tokio::net::TcpListener;
use tokio::sync::watch;
use tokio::task::JoinHandle;
use tower_http::services::ServeDir;

use crate::hub::Hub;
use crate::session::Session;

const PLACEHOLDER_INDEX: &str = "<!doctype html>
<html>
<head><meta charset=\"utf-8\"><title>plane-breaker</title></head>
<body>
<p>plane-breaker relay is running. WebSocket endpoint: <code>/ws</code>.</p>
<p>Start the server with <code>--static-dir</code> to serve the viewer bundle here.</p>
</body>
</html>
";

/// How long a closing connection may spend flushing queued frames.
const CLOSE_GRACE: Duration = Duration::from_secs(2);

#[derive(Clone)]
struct AppState {
    hub: Hub,
    closing: watch::Receiver<bool>,
}

/// A bound but not yet running server.
pub struct Server {
    listener: TcpListener,
    hub: Hub,
    session_task: JoinHandle<Session>,
    static_dir: Option<PathBuf>,
}

impl Server {
    /// Binds the listener and starts the session task.
    pub async fn bind(addr: SocketAddr, session: Session, static_dir: Option<PathBuf>) -> io::Result<Server> {
        let listener = TcpListener::bind(addr).await?;
        let (hub, session_task) = Hub::spawn(session);
        Ok(Server {
            listener,
            hub,
            session_task,
            static_dir,
        })
    }

    pub fn local_addr(&self) -> io::Result<SocketAddr> {
        self.listener.local_addr()
    }

    pub fn hub(&self) -> &Hub {
        &self.hub
    }

    /// Serves until `shutdown` resolves, then closes every WebSocket and
    /// waits for in-flight connections to finish.
    pub async fn run_until<F>(self, shutdown: F) -> io::Result<()>
    where
        F: Future<Output = ()> + Send + 'static,
    {
        let Server {
            listener,
            hub,
            session_task,
            static_dir,
        } = self;
        let (close_tx, closing) = watch::channel(false);
        let app = router(
            AppState {
                hub: hub.clone(),
                closing,
            },
            static_dir,
        );
        let addr = listener.local_addr()?;
        tracing::info!("listening on {addr}");
        axum::serve(listener, app)
            .with_graceful_shutdown(async move {
                shutdown.await;
                tracing::info!("shutting down");
                let _ = close_tx.send(true);
            })
            .await?;
        drop(hub);
        let _ = session_task.await;
        Ok(())
    }
}

fn router(state: AppState, static_dir: Option<PathBuf>) -> Router {
    let app = Router::new().route("/ws", get(upgrade));
    let app = match static_dir {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app.route("/", get(|| async { Html(PLACEHOLDER_INDEX) })),
    };
    app.with_state(state)
}

async fn upgrade(ws: WebSocketUpgrade, State(state): State<AppState>) -> impl IntoResponse {
    ws.on_upgrade(move |socket| pump(socket, state))
}

async fn pump(socket: WebSocket, state: AppState) {
    let AppState { hub, mut closing } = state;
    if *closing.borrow() {
        return;
    }
    let (sender, mut inbox) = hub.connect().split();
    let (mut sink, mut stream) = socket.split();

    // Outbound frames get their own task so a client that reads slowly
    // never delays its own inbound messages.
    let mut writer_closing = closing.clone();
    let mut writer = tokio::spawn(async move {
        loop {
            tokio::select! {
                frame = inbox.recv() => {
                    let Some(frame) = frame else { break };
                    if sink.send(Message::Text(frame.as_ref().into())).await.is_err() {
                        return;
                    }
                }
                _ = writer_closing.changed() => break,
            }
        }
        let _ = sink.send(Message::Close(None)).await;
    });

    loop {
        tokio::select! {
            incoming = stream.next() => match incoming {
                Some(Ok(Message::Text(text))) => {
                    sender.send(text.as_str());
                }
                Some(Ok(Message::Binary(_))) => {
                    tracing::debug!(client = sender.id(), "ignored binary frame");
                }
                Some(Ok(Message::Ping(_) | Message::Pong(_))) => {}
                Some(Ok(Message::Close(_))) | Some(Err(_)) | None => break,
            },
            _ = &mut writer => break,
            _ = closing.changed() => break,
        }
    }
    // Leaving the session ends the outbox, which lets the writer finish.
    drop(sender);
    if !writer.is_finished() {
        let _ = tokio::time::timeout(CLOSE_GRACE, &mut writer).await;
        writer.abort();
    }
}
