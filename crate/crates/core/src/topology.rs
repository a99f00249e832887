//! RRH and user placement, max-received-power association and per-RRH
//! random scheduling.
//!
//! Identifiers double as indices: `rrhs[i].id == i` and `users[j].id == j`.
//! The macro RRH is always id 0 and sits at the origin.

use rand::seq::index;
use rand::Rng;

use crate::channel::LargeScaleGains;
use crate::error::{Error, Result};

pub type RrhId = usize;
pub type UserId = usize;

/// Rejection attempts allowed per small RRH before placement gives up.
pub const PLACEMENT_ATTEMPTS_PER_RRH: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tier {
    Macro,
    Small,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrecodingMode {
    Centralized,
    Distributed,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Hardware profile shared by every RRH of one tier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RrhProfile {
    pub num_antennas: usize,
    pub num_rf_chains: usize,
    /// Total transmit power across all antennas, watts.
    pub tx_power: f64,
}

impl RrhProfile {
    pub fn validate(&self, key: &str) -> Result<()> {
        if self.num_antennas == 0 {
            return Err(Error::config(key, "antenna count must be at least 1"));
        }
        if self.num_rf_chains == 0 || self.num_rf_chains > self.num_antennas {
            return Err(Error::config(
                key,
                format!(
                    "RF-chain count {} must lie in 1..={}",
                    self.num_rf_chains, self.num_antennas
                ),
            ));
        }
        if !(self.tx_power > 0.0 && self.tx_power.is_finite()) {
            return Err(Error::config(key, "transmit power must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rrh {
    pub id: RrhId,
    pub tier: Tier,
    pub position: Point,
    pub num_antennas: usize,
    pub num_rf_chains: usize,
    pub tx_power: f64,
    pub precoding_mode: PrecodingMode,
}

impl Rrh {
    fn from_profile(id: RrhId, tier: Tier, position: Point, profile: &RrhProfile) -> Self {
        Rrh {
            id,
            tier,
            position,
            num_antennas: profile.num_antennas,
            num_rf_chains: profile.num_rf_chains,
            tx_power: profile.tx_power,
            precoding_mode: PrecodingMode::Centralized,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct User {
    pub id: UserId,
    pub position: Point,
    pub serving_rrh: Option<RrhId>,
    pub scheduled: bool,
}

/// Uniform point in a disk of the given radius (uniform in area).
pub fn uniform_in_disk<R: Rng + ?Sized>(radius: f64, rng: &mut R) -> Point {
    let r = radius * rng.gen::<f64>().sqrt();
    let theta = std::f64::consts::TAU * rng.gen::<f64>();
    Point::new(r * theta.cos(), r * theta.sin())
}

/// One macro RRH at the origin followed by `n_small` small RRHs drawn
/// uniformly in the disk, pairwise at least `min_separation` apart.
pub fn place_rrhs<R: Rng + ?Sized>(
    n_small: usize,
    cell_radius: f64,
    min_separation: f64,
    macro_profile: &RrhProfile,
    small_profile: &RrhProfile,
    rng: &mut R,
) -> Result<Vec<Rrh>> {
    let mut rrhs = Vec::with_capacity(n_small + 1);
    rrhs.push(Rrh::from_profile(0, Tier::Macro, Point::ORIGIN, macro_profile));

    let max_attempts = PLACEMENT_ATTEMPTS_PER_RRH * n_small.max(1);
    let mut attempts = 0;
    while rrhs.len() < n_small + 1 {
        if attempts == max_attempts {
            return Err(Error::Placement {
                requested: n_small,
                placed: rrhs.len() - 1,
                attempts,
            });
        }
        attempts += 1;
        let candidate = uniform_in_disk(cell_radius, rng);
        let clear = rrhs
            .iter()
            .filter(|r| r.tier == Tier::Small)
            .all(|r| r.position.distance(&candidate) >= min_separation);
        if clear {
            let id = rrhs.len();
            rrhs.push(Rrh::from_profile(id, Tier::Small, candidate, small_profile));
        }
    }
    Ok(rrhs)
}

pub fn place_users<R: Rng + ?Sized>(n_users: usize, cell_radius: f64, rng: &mut R) -> Vec<User> {
    (0..n_users)
        .map(|id| User {
            id,
            position: uniform_in_disk(cell_radius, rng),
            serving_rrh: None,
            scheduled: false,
        })
        .collect()
}

/// Serves each user from the RRH with the largest average received power
/// `tx_power * gain`. Ties go to the lowest RRH id.
pub fn associate(users: &mut [User], rrhs: &[Rrh], gains: &LargeScaleGains) {
    for user in users.iter_mut() {
        let mut best: Option<(RrhId, f64)> = None;
        for rrh in rrhs {
            let rx = rrh.tx_power * gains.get(rrh.id, user.id);
            if best.is_none_or(|(_, b)| rx > b) {
                best = Some((rrh.id, rx));
            }
        }
        user.serving_rrh = best.map(|(id, _)| id);
        user.scheduled = false;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    pub rrhs: Vec<Rrh>,
    pub users: Vec<User>,
    pub cell_radius: f64,
    /// `schedule[r]` lists the scheduled users of RRH `r` in ascending id order.
    pub schedule: Vec<Vec<UserId>>,
}

impl Topology {
    pub fn new(rrhs: Vec<Rrh>, users: Vec<User>, cell_radius: f64) -> Self {
        let schedule = vec![Vec::new(); rrhs.len()];
        Topology {
            rrhs,
            users,
            cell_radius,
            schedule,
        }
    }

    pub fn associated_users(&self, rrh: RrhId) -> Vec<UserId> {
        self.users
            .iter()
            .filter(|u| u.serving_rrh == Some(rrh))
            .map(|u| u.id)
            .collect()
    }

    /// Scheduled user count `K_r` of an RRH.
    pub fn load(&self, rrh: RrhId) -> usize {
        self.schedule[rrh].len()
    }

    pub fn scheduled_users(&self) -> impl Iterator<Item = UserId> + '_ {
        self.users.iter().filter(|u| u.scheduled).map(|u| u.id)
    }

    pub fn num_scheduled(&self) -> usize {
        self.schedule.iter().map(Vec::len).sum()
    }

    /// Replaces the current schedule: each RRH serves
    /// `min(k_max, S_r, #associated)` users drawn uniformly without
    /// replacement from its associated users.
    pub fn schedule<R: Rng + ?Sized>(&mut self, k_max: usize, rng: &mut R) {
        for user in &mut self.users {
            user.scheduled = false;
        }
        for r in 0..self.rrhs.len() {
            let pool = self.associated_users(r);
            let k = k_max.min(self.rrhs[r].num_rf_chains).min(pool.len());
            let mut picked: Vec<UserId> = index::sample(rng, pool.len(), k)
                .into_iter()
                .map(|i| pool[i])
                .collect();
            picked.sort_unstable();
            for &u in &picked {
                self.users[u].scheduled = true;
            }
            self.schedule[r] = picked;
        }
    }
}
