use std::collections::HashMap;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use uuid::Uuid;

use crate::session::{EngineConfig, GameSession, SessionRecord};

pub type SharedSession = Arc<Mutex<GameSession>>;

/// Live sessions. The map takes a read lock for lookups; each session has
/// its own mutex, so moves on different games never wait on each other.
#[derive(Default)]
pub struct SessionStore {
    sessions: RwLock<HashMap<Uuid, SharedSession>>,
    snapshot: Option<PathBuf>,
    write_lock: Mutex<()>,
}

impl SessionStore {
    pub fn new(snapshot: Option<PathBuf>) -> Self {
        SessionStore { sessions: RwLock::default(), snapshot, write_lock: Mutex::new(()) }
    }

    /// Loads sessions from the snapshot file, if configured and present.
    /// Records that fail to replay are skipped.
    pub fn load(snapshot: Option<PathBuf>, config: &EngineConfig) -> io::Result<Self> {
        let store = SessionStore::new(snapshot);
        if let Some(path) = store.snapshot.as_deref().filter(|p| p.exists()) {
            let records: Vec<SessionRecord> = serde_json::from_slice(&std::fs::read(path)?)?;
            let mut map = store.sessions.write().expect("store lock");
            for r in &records {
                if let Ok(s) = GameSession::from_record(r, config) {
                    map.insert(s.id(), Arc::new(Mutex::new(s)));
                }
            }
        }
        Ok(store)
    }

    pub fn insert(&self, session: GameSession) -> SharedSession {
        let id = session.id();
        let shared = Arc::new(Mutex::new(session));
        self.sessions.write().expect("store lock").insert(id, shared.clone());
        shared
    }

    pub fn get(&self, id: &Uuid) -> Option<SharedSession> {
        self.sessions.read().expect("store lock").get(id).cloned()
    }

    pub fn remove(&self, id: &Uuid) -> bool {
        self.sessions.write().expect("store lock").remove(id).is_some()
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("store lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Drops sessions idle for longer than `ttl`; returns how many.
    pub fn expire(&self, ttl: Duration) -> usize {
        let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let mut map = self.sessions.write().expect("store lock");
        let before = map.len();
        map.retain(|_, s| {
            let last = s.lock().map(|s| s.last_active()).unwrap_or(0);
            now.saturating_sub(last) <= ttl.as_secs()
        });
        before - map.len()
    }

    /// Writes every session to the snapshot file, if one is configured.
    /// Must not be called while holding a session lock.
    pub fn save(&self) -> io::Result<()> {
        let Some(path) = self.snapshot.as_deref() else { return Ok(()) };
        let _guard = self.write_lock.lock().expect("snapshot lock");
        let sessions: Vec<SharedSession> = self.sessions.read().expect("store lock").values().cloned().collect();
        let records: Vec<SessionRecord> =
            sessions.iter().filter_map(|s| s.lock().ok().map(|s| s.to_record())).collect();
        write_atomically(path, &serde_json::to_vec_pretty(&records)?)
    }
}

fn write_atomically(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(tmp, path)
}
