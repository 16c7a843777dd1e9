use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex as SyncMutex};

use seedmask::raster::{BinaryMask, GrayImage, SeedPoint};
use seedmask::store::{load_project, save_project, validate_id, Project, ProjectParams, PROJECT_FILE};
use seedmask::weaklabel::Method;
use tokio::sync::Mutex;

use crate::error::ApiError;

/// Working state for one open project. Seed edits, parameters and
/// computed masks live here until a save writes them to the store.
#[derive(Debug)]
pub struct Session {
    pub root: PathBuf,
    /// The project as last loaded or saved.
    pub stored: Project,
    pub seeds: BTreeMap<String, Vec<SeedPoint>>,
    pub params: ProjectParams,
    pub last_method: Option<Method>,
    /// Masks computed by previews and not yet saved.
    pub masks: BTreeMap<(String, Method), BinaryMask>,
    pub dirty: bool,
    images: HashMap<String, Arc<GrayImage>>,
    issued: u64,
    applied: u64,
}

impl Session {
    pub fn open(root: PathBuf, stored: Project) -> Self {
        Self {
            seeds: stored.seeds.clone(),
            params: stored.params,
            root,
            stored,
            last_method: None,
            masks: BTreeMap::new(),
            dirty: false,
            images: HashMap::new(),
            issued: 0,
            applied: 0,
        }
    }

    pub fn image(&mut self, id: &str) -> Result<Arc<GrayImage>, ApiError> {
        if let Some(img) = self.images.get(id) {
            return Ok(img.clone());
        }
        if self.stored.image(id).is_none() {
            return Err(ApiError::UnknownImage(id.to_string()));
        }
        let img = Arc::new(self.stored.load_image(&self.root, id)?);
        self.images.insert(id.to_string(), img.clone());
        Ok(img)
    }

    /// Ticket for a preview about to run outside the lock.
    pub(crate) fn issue(&mut self) -> u64 {
        self.issued += 1;
        self.issued
    }

    /// Records a finished preview unless a later one was already recorded.
    pub(crate) fn apply_preview(
        &mut self,
        ticket: u64,
        image: &str,
        seeds: Vec<SeedPoint>,
        params: ProjectParams,
        method: Method,
        mask: BinaryMask,
    ) -> bool {
        if ticket < self.applied {
            return false;
        }
        self.applied = ticket;
        if seeds.is_empty() {
            self.seeds.remove(image);
        } else {
            self.seeds.insert(image.to_string(), seeds);
        }
        self.params = params;
        self.last_method = Some(method);
        self.masks.insert((image.to_string(), method), mask);
        self.dirty = true;
        true
    }

    /// The stored project with this session's edits applied. Writes mask
    /// rasters; the caller commits the result only if the document save
    /// also succeeds.
    pub(crate) fn staged(&self) -> seedmask::Result<Project> {
        let mut next = self.stored.clone();
        next.seeds = self.seeds.clone();
        next.params = self.params;
        for ((id, method), mask) in &self.masks {
            next.store_mask(&self.root, id, *method, mask)?;
        }
        next.touch();
        Ok(next)
    }

    pub(crate) fn commit(&mut self, saved: Project) {
        self.stored = saved;
        self.masks.clear();
        self.dirty = false;
    }

    /// The mask to export: an unsaved preview result if there is one,
    /// otherwise the stored raster.
    pub fn export_mask(&self, id: &str, method: Method) -> Result<BinaryMask, ApiError> {
        if self.stored.image(id).is_none() {
            return Err(ApiError::UnknownImage(id.to_string()));
        }
        if let Some(m) = self.masks.get(&(id.to_string(), method)) {
            return Ok(m.clone());
        }
        let entry = self
            .stored
            .mask(id, method)
            .ok_or_else(|| ApiError::BadRequest(format!("no {method} mask for image `{id}` yet")))?;
        Ok(seedmask::io::load_mask(&self.root.join(&entry.path))?)
    }
}

pub type SessionHandle = Arc<Mutex<Session>>;

/// Open sessions keyed by project name. Each project directory lives
/// directly under `dir`.
#[derive(Debug)]
pub struct Registry {
    dir: PathBuf,
    open: SyncMutex<HashMap<String, SessionHandle>>,
}

impl Registry {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self {
            dir: dir.into(),
            open: SyncMutex::new(HashMap::new()),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn project_root(&self, name: &str) -> Result<PathBuf, ApiError> {
        validate_id(name).map_err(|_| ApiError::UnknownProject(name.to_string()))?;
        Ok(self.dir.join(name))
    }

    fn cached(&self, name: &str) -> Option<SessionHandle> {
        self.open.lock().expect("registry lock").get(name).cloned()
    }

    pub fn get(&self, name: &str) -> Result<SessionHandle, ApiError> {
        if let Some(h) = self.cached(name) {
            return Ok(h);
        }
        let root = self.project_root(name)?;
        let doc = root.join(PROJECT_FILE);
        if !doc.is_file() {
            return Err(ApiError::UnknownProject(name.to_string()));
        }
        let project = load_project(&doc)?;
        let handle = Arc::new(Mutex::new(Session::open(root, project)));
        let mut open = self.open.lock().expect("registry lock");
        Ok(open.entry(name.to_string()).or_insert(handle).clone())
    }

    /// Saves `project` as a new project directory and opens a session on it.
    pub fn create(&self, name: &str, root: PathBuf, project: Project) -> Result<SessionHandle, ApiError> {
        save_project(&project, &root.join(PROJECT_FILE))?;
        let handle = Arc::new(Mutex::new(Session::open(root, project)));
        self.open
            .lock()
            .expect("registry lock")
            .insert(name.to_string(), handle.clone());
        Ok(handle)
    }

    /// Project names on disk, sorted.
    pub fn list(&self) -> Result<Vec<String>, ApiError> {
        let entries = match std::fs::read_dir(&self.dir) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(ApiError::BadRequest(format!("{}: {e}", self.dir.display()))),
        };
        let mut names: Vec<String> = entries
            .filter_map(|e| e.ok())
            .filter(|e| e.path().join(PROJECT_FILE).is_file())
            .filter_map(|e| e.file_name().into_string().ok())
            .filter(|n| validate_id(n).is_ok())
            .collect();
        names.sort();
        Ok(names)
    }

    pub fn opened(&self, name: &str) -> Option<SessionHandle> {
        self.cached(name)
    }
}
