//! Scripted sessions driven through the in-process hub transport.

use plane_breaker_core::graphstate::ViewCommand;
use plane_breaker_relay::client::ClientView;
use plane_breaker_relay::hub::{Connection, Hub};
use plane_breaker_relay::protocol::{
    ClientMessage, ErrorCode, Role, ServerMessage, Status, PROTOCOL_VERSION,
};
use rand::Rng;

use crate::{eval_corpus, random_command};

const BAD_SOURCES: [&str; 4] = ["sin(", "x +", "2 ** y", "z = x = y"];

#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Wizard(ClientMessage),
    /// Sent by the live viewer at this index (modulo the viewer count).
    Viewer(usize, ClientMessage),
    JoinViewer,
    LeaveViewer(usize),
    /// A second connection tries to claim the wizard role.
    RivalWizard,
    /// The wizard disconnects and a new one takes over.
    ReplaceWizard,
}

pub fn random_script<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<Step> {
    let corpus = eval_corpus();
    (0..len)
        .map(|_| match rng.random_range(0..20) {
            0..=4 => {
                let source = if rng.random_bool(0.15) {
                    BAD_SOURCES[rng.random_range(0..BAD_SOURCES.len())]
                } else {
                    corpus[rng.random_range(0..corpus.len())]
                };
                Step::Wizard(ClientMessage::SetEquation {
                    source: source.into(),
                })
            }
            5 | 6 => Step::Wizard(ClientMessage::SetStatus {
                status: if rng.random_bool(0.5) {
                    Status::Processing
                } else {
                    Status::Idle
                },
            }),
            7..=9 => Step::Wizard(view_command(random_command(rng))),
            10..=12 => Step::Viewer(rng.random_range(0..8), view_command(random_command(rng))),
            13 => Step::Viewer(
                rng.random_range(0..8),
                ClientMessage::SetEquation { source: "x y".into() },
            ),
            14 => Step::Viewer(
                rng.random_range(0..8),
                ClientMessage::SetStatus {
                    status: Status::Processing,
                },
            ),
            15 | 16 => Step::JoinViewer,
            17 => Step::LeaveViewer(rng.random_range(0..8)),
            18 => Step::RivalWizard,
            _ => Step::ReplaceWizard,
        })
        .collect()
}

fn view_command(command: ViewCommand) -> ClientMessage {
    ClientMessage::ViewCommand { command }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReplayReport {
    pub final_revision: u64,
    pub viewers_checked: usize,
    /// Viewers whose folded broadcasts differ from a late joiner's snapshot.
    pub divergent_viewers: usize,
    /// Viewers that saw a mesh revision skipped or repeated.
    pub revision_gaps: usize,
    /// Role rules that were not enforced: a rival wizard accepted, a viewer
    /// allowed to change the equation or status, or a wizard not freed.
    pub exclusivity_violations: usize,
}

impl ReplayReport {
    pub fn passed(&self) -> bool {
        self.divergent_viewers == 0 && self.revision_gaps == 0 && self.exclusivity_violations == 0
    }
}

struct Viewer {
    conn: Connection,
    view: ClientView,
}

fn encode(msg: &ClientMessage) -> String {
    serde_json::to_string(msg).expect("client messages serialize")
}

fn hello(role: Role) -> String {
    encode(&ClientMessage::Hello {
        role,
        protocol_version: PROTOCOL_VERSION,
    })
}

fn drain(conn: &mut Connection) -> Vec<ServerMessage> {
    std::iter::from_fn(|| conn.try_recv())
        .map(|frame| serde_json::from_str(&frame).expect("server frames decode"))
        .collect()
}

fn is_error(msgs: &[ServerMessage], code: ErrorCode) -> bool {
    matches!(msgs, [ServerMessage::ProtocolError { code: c, .. }] if *c == code)
}

/// Waits until the hub has processed everything sent so far.
async fn settle(hub: &Hub) {
    hub.snapshot().await.expect("hub is running");
}

async fn join_viewer(hub: &Hub) -> Viewer {
    let mut conn = hub.connect();
    conn.send(hello(Role::Viewer));
    settle(hub).await;
    let msgs = drain(&mut conn);
    let view = match msgs.as_slice() {
        [ServerMessage::Welcome { .. }, ServerMessage::Snapshot(s)] => ClientView::from_snapshot(s),
        other => panic!("unexpected viewer handshake: {other:?}"),
    };
    Viewer { conn, view }
}

async fn join_wizard(hub: &Hub) -> Option<Connection> {
    let mut conn = hub.connect();
    conn.send(hello(Role::Wizard));
    settle(hub).await;
    match drain(&mut conn).as_slice() {
        [ServerMessage::Welcome {
            role: Role::Wizard, ..
        }] => Some(conn),
        _ => None,
    }
}

/// Runs `script` against a fresh session behind `hub`, with one wizard and
/// one viewer connected from the start.
pub async fn replay(hub: &Hub, script: &[Step]) -> ReplayReport {
    let mut report = ReplayReport::default();
    let mut wizard = join_wizard(hub).await.expect("first wizard is accepted");
    let mut viewers = vec![join_viewer(hub).await];
    let mut retired: Vec<ClientView> = Vec::new();

    for step in script {
        let mut expect_rejection = None;
        let before = hub.snapshot().await.expect("hub is running");
        match step {
            Step::Wizard(msg) => {
                wizard.send(encode(msg));
            }
            Step::Viewer(i, msg) => {
                if viewers.is_empty() {
                    continue;
                }
                let i = i % viewers.len();
                viewers[i].conn.send(encode(msg));
                if !matches!(msg, ClientMessage::ViewCommand { .. }) {
                    expect_rejection = Some(i);
                }
            }
            Step::JoinViewer => viewers.push(join_viewer(hub).await),
            Step::LeaveViewer(i) => {
                if !viewers.is_empty() {
                    let v = viewers.remove(i % viewers.len());
                    retired.push(v.view);
                }
            }
            Step::RivalWizard => {
                let mut rival = hub.connect();
                rival.send(hello(Role::Wizard));
                settle(hub).await;
                if !is_error(&drain(&mut rival), ErrorCode::WizardTaken) {
                    report.exclusivity_violations += 1;
                }
            }
            Step::ReplaceWizard => {
                drop(wizard);
                match join_wizard(hub).await {
                    Some(w) => wizard = w,
                    None => {
                        report.exclusivity_violations += 1;
                        wizard = join_wizard(hub).await.expect("wizard role is free");
                    }
                }
            }
        }
        settle(hub).await;

        for (i, v) in viewers.iter_mut().enumerate() {
            let msgs = drain(&mut v.conn);
            if expect_rejection == Some(i) {
                let after = hub.snapshot().await.expect("hub is running");
                if !is_error(&msgs, ErrorCode::NotWizard) || after != before {
                    report.exclusivity_violations += 1;
                }
            }
            for m in &msgs {
                v.view.apply(m);
            }
        }
        for m in drain(&mut wizard) {
            if let ServerMessage::ProtocolError { code, message } = m {
                panic!("wizard rejected: {code:?} {message}");
            }
        }
    }

    let late = join_viewer(hub).await;
    report.final_revision = hub.snapshot().await.expect("hub is running").revision;
    for v in viewers.iter().map(|v| &v.view).chain(&retired) {
        report.viewers_checked += 1;
        if !v.revisions_gapless() {
            report.revision_gaps += 1;
        }
    }
    for v in &viewers {
        if !v.view.same_display(&late.view) {
            report.divergent_viewers += 1;
        }
    }
    report
}
