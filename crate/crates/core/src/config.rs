use crate::lp::LpOptions;
use crate::par::Exec;

/// Size guards and execution settings shared by the polyhedral routines.
#[derive(Clone, Debug)]
pub struct Limits {
    /// Brute-force vertex enumeration: maximum dimension.
    pub vertex_dim: usize,
    /// Brute-force vertex enumeration: maximum number of rows (box included).
    pub vertex_rows: usize,
    pub hull_dim: usize,
    pub hull_points: usize,
    /// Binary enumeration for integer-emptiness.
    pub integer_dim: usize,
    /// Largest dimension for which explicit LS closures are projected.
    pub ls_dim: usize,
    /// Intermediate row cap during Fourier-Motzkin elimination.
    pub fm_rows: usize,
    pub orbit_cap: usize,
    pub group_cap: usize,
    pub lp: LpOptions,
    pub exec: Exec,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            vertex_dim: 6,
            vertex_rows: 40,
            hull_dim: 5,
            hull_points: 64,
            integer_dim: 24,
            ls_dim: 3,
            fm_rows: 100_000,
            orbit_cap: crate::perm::DEFAULT_ORBIT_CAP,
            group_cap: crate::perm::DEFAULT_GROUP_CAP,
            lp: LpOptions::default(),
            exec: Exec::default(),
        }
    }
}

impl Limits {
    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self.lp.exec = exec;
        self
    }
}
