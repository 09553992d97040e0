//! JSON wire messages. One message per WebSocket text frame, tagged by a
//! `type` field.

use plane_breaker_core::expr::ParseError;
use plane_breaker_core::graphstate::{Axes, ViewCommand};
use plane_breaker_core::mesh::{AxisMetadata, Domain, SurfaceMesh, ZLimits};
use serde::{Deserialize, Serialize};

pub const PROTOCOL_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Wizard,
    Viewer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    #[default]
    Idle,
    /// Viewers show "OCR Processing…" while the wizard transcribes.
    Processing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum ClientMessage {
    Hello { role: Role, protocol_version: u32 },
    SetEquation { source: String },
    SetStatus { status: Status },
    ViewCommand { command: ViewCommand },
}

impl ClientMessage {
    pub fn kind(&self) -> &'static str {
        match self {
            ClientMessage::Hello { .. } => "Hello",
            ClientMessage::SetEquation { .. } => "SetEquation",
            ClientMessage::SetStatus { .. } => "SetStatus",
            ClientMessage::ViewCommand { .. } => "ViewCommand",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum ServerMessage {
    Welcome {
        session_id: String,
        protocol_version: u32,
        role: Role,
    },
    EquationUpdate(EquationUpdate),
    StatusUpdate {
        status: Status,
    },
    MeshUpdate(MeshUpdate),
    Snapshot(Snapshot),
    ProtocolError {
        code: ErrorCode,
        message: String,
    },
}

impl ServerMessage {
    pub fn kind(&self) -> &'static str {
        match self {
            ServerMessage::Welcome { .. } => "Welcome",
            ServerMessage::EquationUpdate(_) => "EquationUpdate",
            ServerMessage::StatusUpdate { .. } => "StatusUpdate",
            ServerMessage::MeshUpdate(_) => "MeshUpdate",
            ServerMessage::Snapshot(_) => "Snapshot",
            ServerMessage::ProtocolError { .. } => "ProtocolError",
        }
    }

    pub(crate) fn error(code: ErrorCode, message: impl Into<String>) -> Self {
        ServerMessage::ProtocolError {
            code,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    /// A wizard is already connected.
    WizardTaken,
    BadVersion,
    /// A wizard-only message came from a viewer.
    NotWizard,
    BadCommand,
    /// The connection has not sent `Hello` yet.
    HandshakeRequired,
    AlreadyRegistered,
    /// Not valid JSON or not a known client message.
    BadMessage,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireParseError {
    pub position: usize,
    pub reason: String,
}

impl From<&ParseError> for WireParseError {
    fn from(e: &ParseError) -> Self {
        WireParseError {
            position: e.position,
            reason: e.reason.to_string(),
        }
    }
}

/// Result of a `SetEquation`: either the canonical text or a parse error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationUpdate {
    pub source: String,
    pub canonical: Option<String>,
    pub error: Option<WireParseError>,
}

/// A committed equation as carried in snapshots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationInfo {
    pub source: String,
    pub canonical: String,
}

/// Mesh buffers flattened for the wire: three floats per vertex for
/// positions, normals and colors; three indices per triangle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshUpdate {
    pub revision: u64,
    pub positions: Vec<f32>,
    pub normals: Vec<f32>,
    pub colors: Vec<f32>,
    pub indices: Vec<u32>,
    pub axes: AxisMetadata,
    pub label: String,
}

impl MeshUpdate {
    pub fn from_mesh(revision: u64, mesh: &SurfaceMesh) -> Self {
        fn flatten(v: &[[f64; 3]]) -> Vec<f32> {
            v.iter().flat_map(|p| p.map(|c| c as f32)).collect()
        }
        MeshUpdate {
            revision,
            positions: flatten(mesh.positions()),
            normals: flatten(mesh.normals()),
            colors: flatten(mesh.colors()),
            indices: mesh.indices().iter().flatten().copied().collect(),
            axes: mesh.axes().clone(),
            label: mesh.label().to_string(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.positions.len() / 3
    }

    pub fn triangle_count(&self) -> usize {
        self.indices.len() / 3
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxesView {
    pub domain: Domain,
    pub z_limits: ZLimits,
    pub segments: u32,
}

impl From<&Axes> for AxesView {
    fn from(a: &Axes) -> Self {
        AxesView {
            domain: a.domain(),
            z_limits: a.z_limits(),
            segments: a.resolution.segments(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphStateView {
    pub current: AxesView,
    pub defaults: AxesView,
}

/// Everything a late joiner needs to match viewers that saw every broadcast.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub session_id: String,
    pub equation: Option<EquationInfo>,
    pub status: Status,
    pub graph_state: GraphStateView,
    pub revision: u64,
    pub mesh: Option<MeshUpdate>,
}

/// Decodes a client text frame. Failures come back as the `ProtocolError`
/// to send: `bad_command` for a malformed `ViewCommand`, `bad_message`
/// otherwise.
#[allow(clippy::result_large_err)]
pub fn decode_client(text: &str) -> Result<ClientMessage, ServerMessage> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| ServerMessage::error(ErrorCode::BadMessage, format!("invalid JSON: {e}")))?;
    let is_command = value.get("type").and_then(|t| t.as_str()) == Some("ViewCommand");
    serde_json::from_value(value).map_err(|e| {
        let code = if is_command {
            ErrorCode::BadCommand
        } else {
            ErrorCode::BadMessage
        };
        ServerMessage::error(code, e.to_string())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use plane_breaker_core::graphstate::{AxisTarget, ZoomDirection};

    #[test]
    fn client_message_json() {
        let m: ClientMessage =
            serde_json::from_str(r#"{"type":"Hello","role":"wizard","protocol_version":1}"#).unwrap();
        assert_eq!(
            m,
            ClientMessage::Hello {
                role: Role::Wizard,
                protocol_version: 1
            }
        );
        let m: ClientMessage = serde_json::from_str(
            r#"{"type":"ViewCommand","command":{"op":"zoom","direction":"in","target":"input_domain"}}"#,
        )
        .unwrap();
        assert_eq!(
            m,
            ClientMessage::ViewCommand {
                command: ViewCommand::Zoom {
                    direction: ZoomDirection::In,
                    target: AxisTarget::InputDomain
                }
            }
        );
        assert_eq!(
            serde_json::to_string(&ClientMessage::SetStatus {
                status: Status::Processing
            })
            .unwrap(),
            r#"{"type":"SetStatus","status":"processing"}"#
        );
        assert!(serde_json::from_str::<ClientMessage>(r#"{"type":"Snapshot"}"#).is_err());
    }

    #[test]
    fn server_message_json() {
        let json = serde_json::to_value(ServerMessage::error(ErrorCode::WizardTaken, "taken")).unwrap();
        assert_eq!(json["type"], "ProtocolError");
        assert_eq!(json["code"], "wizard_taken");

        let json = serde_json::to_value(ServerMessage::EquationUpdate(EquationUpdate {
            source: "sin(".into(),
            canonical: None,
            error: Some(WireParseError {
                position: 4,
                reason: "unexpected end of input".into(),
            }),
        }))
        .unwrap();
        assert_eq!(json["type"], "EquationUpdate");
        assert_eq!(json["error"]["position"], 4);
        assert!(json["canonical"].is_null());
    }
}
