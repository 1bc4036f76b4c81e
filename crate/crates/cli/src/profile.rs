use clap::ValueEnum;
use serde::Serialize;
use sl2orbit::numeric::RankPolicy;

/// Named tolerance sets for the numeric cross-checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Standard,
    Strict,
    Loose,
}

#[derive(Clone, Debug, Serialize)]
pub struct Tolerances {
    pub profile: Profile,
    pub rank_gap_threshold: f64,
    pub rank_noise_floor: f64,
    pub closure_distance: f64,
    pub eigenvalue_relative: f64,
    pub orbit_step: f64,
}

impl Profile {
    pub fn tolerances(self) -> Tolerances {
        let (gap, closure, eigen) = match self {
            Profile::Standard => (1e6, 1e-6, 1e-6),
            Profile::Strict => (1e8, 1e-7, 1e-8),
            Profile::Loose => (1e4, 1e-4, 1e-4),
        };
        Tolerances {
            profile: self,
            rank_gap_threshold: gap,
            rank_noise_floor: RankPolicy::default().noise_floor,
            closure_distance: closure,
            eigenvalue_relative: eigen,
            orbit_step: 1e-5,
        }
    }
}

impl Tolerances {
    pub fn rank_policy(&self) -> RankPolicy {
        RankPolicy { gap_threshold: self.rank_gap_threshold, noise_floor: self.rank_noise_floor, ..RankPolicy::default() }
    }
}
