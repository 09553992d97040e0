//! The authoritative session: graph state, wizard status and the latest
//! mesh. Transport-free; every input produces a list of addressed outputs.

use std::collections::BTreeMap;

use plane_breaker_core::expr::parse;
use plane_breaker_core::graphstate::{GraphState, ViewCommand};
use plane_breaker_core::mesh::{build_mesh_with, sample_grid_with, ColorMap};
use plane_breaker_core::Execution;

use crate::protocol::{
    decode_client, ClientMessage, EquationInfo, EquationUpdate, ErrorCode, GraphStateView, MeshUpdate, Role,
    ServerMessage, Snapshot, Status, WireParseError, PROTOCOL_VERSION,
};

/// Connection identifier assigned by the transport.
pub type ClientId = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recipient {
    One(ClientId),
    /// Every client that has completed the handshake.
    All,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outgoing {
    pub to: Recipient,
    pub message: ServerMessage,
}

impl Outgoing {
    fn one(id: ClientId, message: ServerMessage) -> Self {
        Outgoing {
            to: Recipient::One(id),
            message,
        }
    }

    fn all(message: ServerMessage) -> Self {
        Outgoing {
            to: Recipient::All,
            message,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SessionConfig {
    pub session_id: String,
    pub initial_state: GraphState,
    pub colormap: ColorMap,
    pub execution: Execution,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            session_id: uuid::Uuid::new_v4().to_string(),
            initial_state: GraphState::default(),
            colormap: ColorMap::default(),
            execution: Execution::default(),
        }
    }
}

pub struct Session {
    id: String,
    state: GraphState,
    status: Status,
    revision: u64,
    equation: Option<EquationInfo>,
    latest_mesh: Option<MeshUpdate>,
    clients: BTreeMap<ClientId, Role>,
    colormap: ColorMap,
    execution: Execution,
}

impl Session {
    pub fn new(config: SessionConfig) -> Self {
        Session {
            id: config.session_id,
            state: config.initial_state,
            status: Status::Idle,
            revision: 0,
            equation: None,
            latest_mesh: None,
            clients: BTreeMap::new(),
            colormap: config.colormap,
            execution: config.execution,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn state(&self) -> &GraphState {
        &self.state
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn revision(&self) -> u64 {
        self.revision
    }

    pub fn role_of(&self, id: ClientId) -> Option<Role> {
        self.clients.get(&id).copied()
    }

    pub fn wizard(&self) -> Option<ClientId> {
        self.clients
            .iter()
            .find(|(_, r)| **r == Role::Wizard)
            .map(|(id, _)| *id)
    }

    /// Registered clients in ascending id order.
    pub fn registered(&self) -> impl Iterator<Item = ClientId> + '_ {
        self.clients.keys().copied()
    }

    /// Decodes one text frame and handles it.
    pub fn handle_text(&mut self, from: ClientId, text: &str) -> Vec<Outgoing> {
        match decode_client(text) {
            Ok(msg) => self.handle(from, msg),
            Err(err) => vec![Outgoing::one(from, err)],
        }
    }

    pub fn handle(&mut self, from: ClientId, msg: ClientMessage) -> Vec<Outgoing> {
        let role = self.clients.get(&from).copied();
        match (msg, role) {
            (
                ClientMessage::Hello {
                    role,
                    protocol_version,
                },
                None,
            ) => self.handle_hello(from, role, protocol_version),
            (ClientMessage::Hello { .. }, Some(_)) => vec![Outgoing::one(
                from,
                ServerMessage::error(ErrorCode::AlreadyRegistered, "Hello was already accepted"),
            )],
            (_, None) => vec![Outgoing::one(
                from,
                ServerMessage::error(ErrorCode::HandshakeRequired, "the first message must be Hello"),
            )],
            (ClientMessage::SetEquation { .. } | ClientMessage::SetStatus { .. }, Some(Role::Viewer)) => {
                vec![Outgoing::one(
                    from,
                    ServerMessage::error(ErrorCode::NotWizard, "only the wizard may do that"),
                )]
            }
            (ClientMessage::SetEquation { source }, Some(Role::Wizard)) => self.handle_set_equation(source),
            (ClientMessage::SetStatus { status }, Some(Role::Wizard)) => self.handle_set_status(status),
            (ClientMessage::ViewCommand { command }, Some(_)) => self.handle_view_command(from, command),
        }
    }

    fn handle_hello(&mut self, from: ClientId, role: Role, version: u32) -> Vec<Outgoing> {
        if version != PROTOCOL_VERSION {
            return vec![Outgoing::one(
                from,
                ServerMessage::error(
                    ErrorCode::BadVersion,
                    format!("server speaks protocol {PROTOCOL_VERSION}, client sent {version}"),
                ),
            )];
        }
        if role == Role::Wizard && self.wizard().is_some() {
            return vec![Outgoing::one(
                from,
                ServerMessage::error(ErrorCode::WizardTaken, "another wizard is connected"),
            )];
        }
        self.clients.insert(from, role);
        let mut out = vec![Outgoing::one(
            from,
            ServerMessage::Welcome {
                session_id: self.id.clone(),
                protocol_version: PROTOCOL_VERSION,
                role,
            },
        )];
        if role == Role::Viewer {
            out.push(Outgoing::one(from, ServerMessage::Snapshot(self.snapshot())));
        }
        out
    }

    fn handle_set_equation(&mut self, source: String) -> Vec<Outgoing> {
        let expr = match parse(&source) {
            Ok(e) => e,
            Err(err) => {
                return vec![Outgoing::all(ServerMessage::EquationUpdate(EquationUpdate {
                    source,
                    canonical: None,
                    error: Some(WireParseError::from(&err)),
                }))]
            }
        };
        let canonical = expr.canonical_text();
        self.state = match self.state.set_equation(expr) {
            Ok(s) => s,
            // Unreachable for parser output, which only knows x and y.
            Err(e) => {
                return vec![Outgoing::all(ServerMessage::EquationUpdate(EquationUpdate {
                    source,
                    canonical: None,
                    error: Some(WireParseError {
                        position: 0,
                        reason: e.to_string(),
                    }),
                }))]
            }
        };
        self.equation = Some(EquationInfo {
            source: source.clone(),
            canonical: canonical.clone(),
        });
        self.status = Status::Idle;

        let mut out = vec![Outgoing::all(ServerMessage::EquationUpdate(EquationUpdate {
            source,
            canonical: Some(canonical),
            error: None,
        }))];
        out.extend(self.remesh());
        out.push(Outgoing::all(ServerMessage::StatusUpdate {
            status: Status::Idle,
        }));
        out
    }

    fn handle_set_status(&mut self, status: Status) -> Vec<Outgoing> {
        self.status = status;
        vec![Outgoing::all(ServerMessage::StatusUpdate { status })]
    }

    fn handle_view_command(&mut self, from: ClientId, command: ViewCommand) -> Vec<Outgoing> {
        match self.state.apply_command(command) {
            Ok(next) => {
                self.state = next;
                self.remesh().into_iter().collect()
            }
            Err(e) => vec![Outgoing::one(
                from,
                ServerMessage::error(ErrorCode::BadCommand, e.to_string()),
            )],
        }
    }

    /// Rebuilds the mesh for the current state, if an equation is set.
    fn remesh(&mut self) -> Option<Outgoing> {
        let expr = self.state.equation()?;
        let field = sample_grid_with(expr, self.state.domain(), self.state.resolution(), self.execution);
        let mesh = build_mesh_with(
            expr,
            &field,
            self.state.z_limits(),
            &self.colormap,
            self.execution,
        );
        self.revision += 1;
        let update = MeshUpdate::from_mesh(self.revision, &mesh);
        self.latest_mesh = Some(update.clone());
        Some(Outgoing::all(ServerMessage::MeshUpdate(update)))
    }

    /// Drops a connection. A departing wizard frees the role; state is kept.
    pub fn disconnect(&mut self, id: ClientId) {
        self.clients.remove(&id);
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            session_id: self.id.clone(),
            equation: self.equation.clone(),
            status: self.status,
            graph_state: GraphStateView {
                current: self.state.axes().into(),
                defaults: self.state.defaults().into(),
            },
            revision: self.revision,
            mesh: self.latest_mesh.clone(),
        }
    }
}
