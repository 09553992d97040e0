//! Single-writer task that owns a [`Session`] and fans its output out to
//! connections. Any transport (WebSocket, in-process channels in tests)
//! attaches through [`Hub::connect`].

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use tokio::sync::{mpsc, oneshot};
use tokio::task::JoinHandle;

use crate::protocol::{decode_client, ServerMessage, Snapshot};
use crate::session::{ClientId, Outgoing, Recipient, Session};

/// A serialized server message, shared between all recipients.
pub type Frame = Arc<str>;

enum Event {
    Join {
        id: ClientId,
        outbox: mpsc::UnboundedSender<Frame>,
    },
    Text {
        id: ClientId,
        text: String,
    },
    Leave {
        id: ClientId,
    },
    Snapshot {
        reply: oneshot::Sender<Snapshot>,
    },
}

#[derive(Clone)]
pub struct Hub {
    events: mpsc::UnboundedSender<Event>,
    next_id: Arc<AtomicU64>,
}

impl Hub {
    /// Starts the session task. It runs until every `Hub` handle and every
    /// connection is gone, then hands the session back.
    pub fn spawn(session: Session) -> (Hub, JoinHandle<Session>) {
        let (events, rx) = mpsc::unbounded_channel();
        let task = tokio::spawn(run(session, rx));
        (
            Hub {
                events,
                next_id: Arc::new(AtomicU64::new(1)),
            },
            task,
        )
    }

    pub fn connect(&self) -> Connection {
        let id = self.next_id.fetch_add(1, Ordering::Relaxed);
        let (outbox, inbox) = mpsc::unbounded_channel();
        let _ = self.events.send(Event::Join { id, outbox });
        Connection {
            sender: ConnectionSender {
                id,
                events: self.events.clone(),
            },
            inbox,
        }
    }

    /// Current snapshot, taken between two commands.
    pub async fn snapshot(&self) -> Option<Snapshot> {
        let (reply, rx) = oneshot::channel();
        self.events.send(Event::Snapshot { reply }).ok()?;
        rx.await.ok()
    }
}

/// One attached client: send text frames in, receive serialized frames out.
pub struct Connection {
    sender: ConnectionSender,
    inbox: mpsc::UnboundedReceiver<Frame>,
}

impl Connection {
    pub fn id(&self) -> ClientId {
        self.sender.id
    }

    pub fn send(&self, text: impl Into<String>) -> bool {
        self.sender.send(text)
    }

    pub async fn recv(&mut self) -> Option<Frame> {
        self.inbox.recv().await
    }

    pub fn try_recv(&mut self) -> Option<Frame> {
        self.inbox.try_recv().ok()
    }

    pub fn split(self) -> (ConnectionSender, mpsc::UnboundedReceiver<Frame>) {
        (self.sender, self.inbox)
    }
}

/// Sending half of a [`Connection`]; dropping it disconnects the client.
pub struct ConnectionSender {
    id: ClientId,
    events: mpsc::UnboundedSender<Event>,
}

impl ConnectionSender {
    pub fn id(&self) -> ClientId {
        self.id
    }

    pub fn send(&self, text: impl Into<String>) -> bool {
        self.events
            .send(Event::Text {
                id: self.id,
                text: text.into(),
            })
            .is_ok()
    }
}

impl Drop for ConnectionSender {
    fn drop(&mut self) {
        let _ = self.events.send(Event::Leave { id: self.id });
    }
}

async fn run(mut session: Session, mut events: mpsc::UnboundedReceiver<Event>) -> Session {
    let mut outboxes: HashMap<ClientId, mpsc::UnboundedSender<Frame>> = HashMap::new();
    while let Some(event) = events.recv().await {
        match event {
            Event::Join { id, outbox } => {
                tracing::debug!(client = id, "connected");
                outboxes.insert(id, outbox);
            }
            Event::Leave { id } => {
                tracing::debug!(client = id, "disconnected");
                outboxes.remove(&id);
                session.disconnect(id);
            }
            Event::Snapshot { reply } => {
                let _ = reply.send(session.snapshot());
            }
            Event::Text { id, text } => {
                let out = match decode_client(&text) {
                    Ok(msg) => {
                        tracing::info!(client = id, kind = msg.kind(), "received");
                        session.handle(id, msg)
                    }
                    Err(err) => {
                        tracing::info!(client = id, kind = "invalid", "received");
                        vec![Outgoing {
                            to: Recipient::One(id),
                            message: err,
                        }]
                    }
                };
                dispatch(&session, &outboxes, out);
            }
        }
    }
    session
}

fn dispatch(
    session: &Session,
    outboxes: &HashMap<ClientId, mpsc::UnboundedSender<Frame>>,
    out: Vec<Outgoing>,
) {
    for Outgoing { to, message } in out {
        let frame = encode(&message);
        match to {
            Recipient::One(id) => {
                if let Some(tx) = outboxes.get(&id) {
                    let _ = tx.send(frame);
                }
            }
            Recipient::All => {
                for id in session.registered() {
                    if let Some(tx) = outboxes.get(&id) {
                        let _ = tx.send(frame.clone());
                    }
                }
            }
        }
    }
}

fn encode(message: &ServerMessage) -> Frame {
    // Server messages contain only strings, integers and finite floats.
    serde_json::to_string(message)
        .expect("server messages always serialize")
        .into()
}
