//! Sessions of rendered panels.
//!
//! Each session publishes an immutable [`Snapshot`] through an atomic
//! pointer. Writers hold the session's mutex while they render and then
//! swap in a new snapshot; readers load the current one without locking.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, MutexGuard};
use std::time::{Duration, Instant};

use arc_swap::ArcSwap;
use plot94_core::backend::{emit_hpgl, emit_svg, BackendError, PageSetup};
use plot94_core::DisplayList;
use thiserror::Error;

use crate::spec::{render_spec, FieldError, PanelSpec, RenderError};

pub const MAX_SESSIONS: usize = 64;
pub const MAX_PANELS: usize = 16;
pub const IDLE_TIMEOUT: Duration = Duration::from_secs(30 * 60);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ServiceError {
    #[error("no such session")]
    UnknownSession,
    #[error("no panel {0}")]
    UnknownPanel(usize),
    #[error("{0}")]
    Capacity(String),
    #[error("invalid panel spec")]
    Validation(Vec<FieldError>),
    #[error("render failed: {0}")]
    Render(String),
    #[error("export failed: {0}")]
    Export(#[from] BackendError),
}

impl From<RenderError> for ServiceError {
    fn from(e: RenderError) -> Self {
        match e {
            RenderError::Invalid(f) => ServiceError::Validation(f),
            RenderError::Scene(s) => ServiceError::Render(s.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub spec: PanelSpec,
    pub revision: u64,
    pub list: Arc<DisplayList>,
}

/// One published state of a session.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    /// Last revision handed out in this session.
    pub revision: u64,
    pub panels: Vec<Arc<Panel>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Hpgl,
    Svg,
}

impl ExportFormat {
    pub fn content_type(self) -> &'static str {
        match self {
            ExportFormat::Hpgl => "application/vnd.hp-hpgl",
            ExportFormat::Svg => "image/svg+xml",
        }
    }
}

struct Session {
    writer: Mutex<()>,
    published: ArcSwap<Snapshot>,
    /// Milliseconds since the store's epoch.
    last_used: AtomicU64,
}

pub struct SessionStore {
    sessions: Mutex<HashMap<String, Arc<Session>>>,
    epoch: Instant,
    max_sessions: usize,
    idle_timeout: Duration,
}

impl Default for SessionStore {
    fn default() -> Self {
        Self::new(MAX_SESSIONS, IDLE_TIMEOUT)
    }
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|e| e.into_inner())
}

fn render(spec: &PanelSpec, revision: u64) -> Result<Arc<Panel>, ServiceError> {
    let list = render_spec(spec)?;
    Ok(Arc::new(Panel {
        spec: spec.clone(),
        revision,
        list: Arc::new(list),
    }))
}

impl SessionStore {
    pub fn new(max_sessions: usize, idle_timeout: Duration) -> Self {
        SessionStore {
            sessions: Mutex::new(HashMap::new()),
            epoch: Instant::now(),
            max_sessions,
            idle_timeout,
        }
    }

    fn millis(&self, at: Instant) -> u64 {
        at.saturating_duration_since(self.epoch).as_millis() as u64
    }

    fn get(&self, id: &str) -> Result<Arc<Session>, ServiceError> {
        let s = lock(&self.sessions)
            .get(id)
            .cloned()
            .ok_or(ServiceError::UnknownSession)?;
        s.last_used
            .store(self.millis(Instant::now()), Ordering::Relaxed);
        Ok(s)
    }

    /// Drops sessions idle for longer than the timeout as of `now`.
    /// Returns how many were dropped.
    pub fn evict_idle(&self, now: Instant) -> usize {
        let cutoff = self.millis(now).saturating_sub(self.idle_timeout.as_millis() as u64);
        let mut map = lock(&self.sessions);
        let before = map.len();
        map.retain(|_, s| s.last_used.load(Ordering::Relaxed) >= cutoff);
        before - map.len()
    }

    pub fn session_count(&self) -> usize {
        lock(&self.sessions).len()
    }

    /// New session holding one default panel at revision 1.
    pub fn create_session(&self) -> Result<String, ServiceError> {
        self.evict_idle(Instant::now());
        if self.session_count() >= self.max_sessions {
            return Err(ServiceError::Capacity(format!(
                "session limit of {} reached",
                self.max_sessions
            )));
        }
        let panel = render(&PanelSpec::default(), 1)?;
        let session = Arc::new(Session {
            writer: Mutex::new(()),
            published: ArcSwap::from_pointee(Snapshot {
                revision: 1,
                panels: vec![panel],
            }),
            last_used: AtomicU64::new(self.millis(Instant::now())),
        });
        let mut map = lock(&self.sessions);
        if map.len() >= self.max_sessions {
            return Err(ServiceError::Capacity(format!(
                "session limit of {} reached",
                self.max_sessions
            )));
        }
        let id = uuid::Uuid::new_v4().simple().to_string();
        map.insert(id.clone(), session);
        Ok(id)
    }

    pub fn snapshot(&self, id: &str) -> Result<Arc<Snapshot>, ServiceError> {
        Ok(self.get(id)?.published.load_full())
    }

    pub fn panel(&self, id: &str, index: usize) -> Result<Arc<Panel>, ServiceError> {
        self.snapshot(id)?
            .panels
            .get(index)
            .cloned()
            .ok_or(ServiceError::UnknownPanel(index))
    }

    /// Applies `f` to a copy of the current snapshot under the writer lock
    /// and publishes the result.
    fn mutate<T>(
        &self,
        id: &str,
        f: impl FnOnce(&mut Snapshot, u64) -> Result<T, ServiceError>,
    ) -> Result<T, ServiceError> {
        let session = self.get(id)?;
        let _guard = lock(&session.writer);
        let mut next = Snapshot::clone(&session.published.load());
        let revision = next.revision + 1;
        let out = f(&mut next, revision)?;
        next.revision = revision;
        session.published.store(Arc::new(next));
        Ok(out)
    }

    /// Re-renders panel `index` from `spec`; returns its new revision.
    pub fn update_panel(&self, id: &str, index: usize, spec: PanelSpec) -> Result<u64, ServiceError> {
        self.mutate(id, |snap, rev| {
            if index >= snap.panels.len() {
                return Err(ServiceError::UnknownPanel(index));
            }
            snap.panels[index] = render(&spec, rev)?;
            Ok(rev)
        })
    }

    /// Appends a panel; returns its index and revision.
    pub fn add_panel(&self, id: &str, spec: PanelSpec) -> Result<(usize, u64), ServiceError> {
        self.mutate(id, |snap, rev| {
            if snap.panels.len() >= MAX_PANELS {
                return Err(ServiceError::Capacity(format!(
                    "a session holds at most {MAX_PANELS} panels"
                )));
            }
            snap.panels.push(render(&spec, rev)?);
            Ok((snap.panels.len() - 1, rev))
        })
    }

    /// Removes a panel; later panels shift down. Returns the session
    /// revision after removal.
    pub fn remove_panel(&self, id: &str, index: usize) -> Result<u64, ServiceError> {
        self.mutate(id, |snap, rev| {
            if index >= snap.panels.len() {
                return Err(ServiceError::UnknownPanel(index));
            }
            if snap.panels.len() == 1 {
                return Err(ServiceError::Capacity(
                    "a session keeps at least one panel".into(),
                ));
            }
            snap.panels.remove(index);
            Ok(rev)
        })
    }

    pub fn export_panel(
        &self,
        id: &str,
        index: usize,
        format: ExportFormat,
    ) -> Result<Vec<u8>, ServiceError> {
        let panel = self.panel(id, index)?;
        let page = PageSetup::default();
        Ok(match format {
            ExportFormat::Hpgl => emit_hpgl(&panel.list, &page)?.to_file_string().into_bytes(),
            ExportFormat::Svg => emit_svg(&panel.list, &page).into_bytes(),
        })
    }
}
