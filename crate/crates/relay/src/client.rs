//! What a viewer knows after applying server messages in order.

use crate::protocol::{EquationInfo, MeshUpdate, ServerMessage, Snapshot, Status};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ClientView {
    pub equation: Option<EquationInfo>,
    pub status: Status,
    pub mesh: Option<MeshUpdate>,
    /// Revisions of every mesh received, snapshot included.
    pub revisions: Vec<u64>,
}

impl ClientView {
    pub fn from_snapshot(snapshot: &Snapshot) -> Self {
        let mut view = ClientView::default();
        view.apply_snapshot(snapshot);
        view
    }

    fn apply_snapshot(&mut self, snapshot: &Snapshot) {
        self.equation = snapshot.equation.clone();
        self.status = snapshot.status;
        self.mesh = snapshot.mesh.clone();
        if let Some(m) = &snapshot.mesh {
            self.revisions.push(m.revision);
        }
    }

    pub fn apply(&mut self, msg: &ServerMessage) {
        match msg {
            ServerMessage::Snapshot(s) => self.apply_snapshot(s),
            ServerMessage::EquationUpdate(u) => {
                if let (None, Some(canonical)) = (&u.error, &u.canonical) {
                    self.equation = Some(EquationInfo {
                        source: u.source.clone(),
                        canonical: canonical.clone(),
                    });
                }
            }
            ServerMessage::StatusUpdate { status } => self.status = *status,
            ServerMessage::MeshUpdate(m) => {
                self.revisions.push(m.revision);
                self.mesh = Some(m.clone());
            }
            ServerMessage::Welcome { .. } | ServerMessage::ProtocolError { .. } => {}
        }
    }

    /// Whether the observed mesh revisions increase by exactly one each time.
    pub fn revisions_gapless(&self) -> bool {
        self.revisions.windows(2).all(|w| w[1] == w[0] + 1)
    }

    /// Field-by-field equality of the displayed state (history excluded).
    pub fn same_display(&self, other: &ClientView) -> bool {
        self.equation == other.equation && self.status == other.status && self.mesh == other.mesh
    }
}
