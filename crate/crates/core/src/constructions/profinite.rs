//! Finite quotient actions: cyclic and torus shifts, and uniform random
//! permutations standing in for sofic approximations of free groups.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::action::{FiniteAction, LabelWord, Mode};
use crate::error::{Error, Result};
use crate::seed::stage_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// One generator shifting `Z/NZ`.
    Cyclic,
    /// Two commuting unit shifts on `(Z/mZ)²`; the size parameter is `m`.
    Torus,
    /// `d` independent uniform permutations.
    FreeRandom { d: u32 },
}

impl Preset {
    pub fn parse(name: &str, d: u32) -> Result<Preset> {
        match name {
            "cyclic" => Ok(Preset::Cyclic),
            "torus" => Ok(Preset::Torus),
            "free-random" => Ok(Preset::FreeRandom { d }),
            _ => Err(Error::input(format!("unknown preset '{name}'"))),
        }
    }
}

/// Vertex labels of a built action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Labeling {
    Zeros(usize),
    /// i.i.d. uniform bits drawn from `seed`.
    Iid { k: usize, seed: u64 },
}

impl Labeling {
    pub fn draw(&self, n: usize) -> Vec<LabelWord> {
        match *self {
            Labeling::Zeros(k) => vec![LabelWord::zeros(k); n],
            Labeling::Iid { k, seed } => {
                let mut rng = stage_rng(seed, "labels");
                (0..n)
                    .map(|_| LabelWord::new((0..k).map(|_| rng.random::<bool>()).collect()))
                    .collect()
            }
        }
    }
}

fn shift(n: usize) -> Vec<u32> {
    (0..n as u32).map(|v| (v + 1) % n as u32).collect()
}

pub fn build_profinite(preset: Preset, size: usize, labels: Labeling, seed: u64) -> Result<FiniteAction> {
    if size == 0 {
        return Err(Error::input("size must be at least 1"));
    }
    let gens = match preset {
        Preset::Cyclic => vec![shift(size)],
        Preset::Torus => {
            let m = size;
            let n = m
                .checked_mul(m)
                .filter(|&n| n <= u32::MAX as usize)
                .ok_or_else(|| Error::input("torus too large"))?;
            let idx = |x: usize, y: usize| (y * m + x) as u32;
            let mut g1 = vec![0; n];
            let mut g2 = vec![0; n];
            for y in 0..m {
                for x in 0..m {
                    g1[y * m + x] = idx((x + 1) % m, y);
                    g2[y * m + x] = idx(x, (y + 1) % m);
                }
            }
            vec![g1, g2]
        }
        Preset::FreeRandom { d } => {
            if d == 0 {
                return Err(Error::input("free-random needs at least one generator"));
            }
            (1..=d)
                .map(|i| {
                    let mut rng = stage_rng(seed, &format!("free-random/{i}"));
                    let mut p: Vec<u32> = (0..size as u32).collect();
                    p.shuffle(&mut rng);
                    p
                })
                .collect()
        }
    };
    let n = gens[0].len();
    FiniteAction::new(Mode::Free, gens, labels.draw(n))
}
