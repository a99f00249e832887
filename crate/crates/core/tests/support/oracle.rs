// Brute-force SINR enumeration over plain nested vectors, plus seeded
// micro-instances (at most 4 RRHs, M <= 4, K <= 2) to compare against.

use hcran_core::channel::{CVec, ChannelSet, LargeScaleGains};
use hcran_core::precoding::{mrt_precoder, zf_with_nulling, CMat, PrecoderSet, RrhPrecoder};
use hcran_core::topology::{Point, PrecodingMode, Rrh, Tier, Topology, User, UserId};
use hcran_core::num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// One precoder column: transmitting RRH, intended user, antenna weights.
#[derive(Debug, Clone)]
pub struct Column {
    pub rrh: usize,
    pub user: UserId,
    pub weights: Vec<Complex64>,
}

#[derive(Debug)]
pub struct MicroInstance {
    pub topology: Topology,
    pub channels: ChannelSet,
    pub precoders: PrecoderSet,
    pub noise: f64,
    /// `h[r][u][m]`
    pub h: Vec<Vec<Vec<Complex64>>>,
    pub columns: Vec<Column>,
}

/// SINR of every user that owns at least one column, ascending user id.
pub fn brute_force_sinr(h: &[Vec<Vec<Complex64>>], columns: &[Column], noise: f64) -> Vec<(UserId, f64)> {
    let mut users: Vec<UserId> = columns.iter().map(|c| c.user).collect();
    users.sort_unstable();
    users.dedup();

    let mut out = Vec::new();
    for &u in &users {
        let mut signal = 0.0;
        let mut interference = 0.0;
        for &v in &users {
            let mut re = 0.0;
            let mut im = 0.0;
            for col in columns.iter().filter(|c| c.user == v) {
                let hu = &h[col.rrh][u];
                for m in 0..hu.len() {
                    // conj(h_m) * w_m
                    let (a, b) = (hu[m].re, -hu[m].im);
                    let (c, d) = (col.weights[m].re, col.weights[m].im);
                    re += a * c - b * d;
                    im += a * d + b * c;
                }
            }
            let power = re * re + im * im;
            if v == u {
                signal = power;
            } else {
                interference += power;
            }
        }
        out.push((u, signal / (noise + interference)));
    }
    out
}

pub fn brute_force_sum_rate(sinr: &[(UserId, f64)], bandwidth: f64, tau_over_t: f64) -> f64 {
    let mut se = 0.0;
    for &(_, s) in sinr {
        se += (1.0 + s).ln() / std::f64::consts::LN_2;
    }
    (1.0 - tau_over_t) * bandwidth * se
}

fn gaussian(rng: &mut ChaCha20Rng) -> Complex64 {
    // Box-Muller, kept separate from the library sampler.
    let u1: f64 = rng.gen_range(1e-12..1.0);
    let u2: f64 = rng.gen();
    let r = (-u1.ln()).sqrt();
    let t = std::f64::consts::TAU * u2;
    Complex64::new(r * t.cos(), r * t.sin())
}

fn to_cvec(v: &[Complex64]) -> CVec {
    CVec::from_vec(v.to_vec())
}

/// Variant `0` uses conjugate beamforming everywhere, `1` plain ZF, `2`
/// nulling ZF towards foreign users where antennas allow, `3` arbitrary
/// random matrices and `4` adds a second column for one user on a foreign
/// RRH so that its stream combines coherently.
pub fn micro_instance(seed: u64, variant: u8) -> MicroInstance {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let n_rrh = rng.gen_range(2..=4);

    let mut rrhs = Vec::new();
    let mut users = Vec::new();
    let mut schedule = Vec::new();
    for r in 0..n_rrh {
        let m = rng.gen_range(2..=4);
        let k = rng.gen_range(1..=2usize.min(m));
        rrhs.push(Rrh {
            id: r,
            tier: if r == 0 { Tier::Macro } else { Tier::Small },
            position: Point::new(100.0 * r as f64, 0.0),
            num_antennas: m,
            num_rf_chains: m,
            tx_power: rng.gen_range(0.5..4.0),
            precoding_mode: PrecodingMode::Centralized,
        });
        let mut served = Vec::new();
        for _ in 0..k {
            let id = users.len();
            users.push(User {
                id,
                position: Point::new(100.0 * r as f64, 10.0),
                serving_rrh: Some(r),
                scheduled: true,
            });
            served.push(id);
        }
        schedule.push(served);
    }
    let n_users = users.len();

    let mut h = vec![vec![Vec::new(); n_users]; n_rrh];
    for r in 0..n_rrh {
        for u in 0..n_users {
            let amp: f64 = rng.gen_range(0.3..1.5);
            h[r][u] = (0..rrhs[r].num_antennas).map(|_| gaussian(&mut rng) * amp).collect();
        }
    }

    let mut columns = Vec::new();
    for r in 0..n_rrh {
        let served: Vec<CVec> = schedule[r].iter().map(|&u| to_cvec(&h[r][u])).collect();
        let p = rrhs[r].tx_power;
        let w: CMat = match variant {
            0 => mrt_precoder(&served, p).unwrap(),
            1 => zf_with_nulling(&served, &[], p).unwrap(),
            2 => {
                let room = rrhs[r].num_antennas - served.len();
                let victims: Vec<CVec> = (0..n_users)
                    .filter(|u| !schedule[r].contains(u))
                    .take(room)
                    .map(|u| to_cvec(&h[r][u]))
                    .collect();
                zf_with_nulling(&served, &victims, p).unwrap()
            }
            _ => CMat::from_fn(rrhs[r].num_antennas, served.len(), |_, _| gaussian(&mut rng)),
        };
        for (k, &u) in schedule[r].iter().enumerate() {
            columns.push(Column {
                rrh: r,
                user: u,
                weights: w.column(k).iter().copied().collect(),
            });
        }
    }
    if variant == 4 {
        let u = schedule[0][0];
        let m = rrhs[1].num_antennas;
        columns.push(Column {
            rrh: 1,
            user: u,
            weights: (0..m).map(|_| gaussian(&mut rng) * 0.5).collect(),
        });
    }

    let precoders = PrecoderSet {
        rrhs: (0..n_rrh)
            .map(|r| {
                let cols: Vec<&Column> = columns.iter().filter(|c| c.rrh == r).collect();
                let m = rrhs[r].num_antennas;
                RrhPrecoder {
                    rrh: r,
                    users: cols.iter().map(|c| c.user).collect(),
                    w: CMat::from_fn(m, cols.len(), |i, j| cols[j].weights[i]),
                }
            })
            .collect(),
    };

    let noise = rng.gen_range(0.05..1.0);
    let channel_opts = h
        .iter()
        .map(|row| row.iter().map(|v| Some(to_cvec(v))).collect())
        .collect();
    let gains = LargeScaleGains::from_matrix(hcran_core::nalgebra::DMatrix::from_element(n_rrh, n_users, 1.0));
    let channels = ChannelSet::from_channels(channel_opts, gains, noise);

    let mut topology = Topology::new(rrhs, users, 500.0);
    topology.schedule = schedule;
    MicroInstance {
        topology,
        channels,
        precoders,
        noise,
        h,
        columns,
    }
}

pub fn relative_error(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
