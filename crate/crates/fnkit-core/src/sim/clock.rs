//! Simulation clock: virtual time for deterministic runs, a monotonic wall
//! clock for timing KPIs.

use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClockMode {
    Virtual,
    Wall,
}

/// Microsecond clock. Virtual time only moves via [`SimClock::advance_to`].
#[derive(Debug, Clone)]
pub enum SimClock {
    Virtual { now_us: u64 },
    Wall { start: Instant },
}

impl SimClock {
    pub fn virtual_clock() -> Self {
        SimClock::Virtual { now_us: 0 }
    }

    pub fn wall_clock() -> Self {
        SimClock::Wall {
            start: Instant::now(),
        }
    }

    pub fn mode(&self) -> ClockMode {
        match self {
            SimClock::Virtual { .. } => ClockMode::Virtual,
            SimClock::Wall { .. } => ClockMode::Wall,
        }
    }

    pub fn now_us(&self) -> u64 {
        match self {
            SimClock::Virtual { now_us } => *now_us,
            SimClock::Wall { start } => start.elapsed().as_micros() as u64,
        }
    }

    /// Move to an absolute timestamp: a virtual clock jumps, a wall clock
    /// sleeps until the target (and returns immediately when already past).
    pub fn advance_to(&mut self, t_us: u64) {
        match self {
            SimClock::Virtual { now_us } => {
                debug_assert!(t_us >= *now_us, "virtual time cannot move backwards");
                *now_us = t_us.max(*now_us);
            }
            SimClock::Wall { start } => {
                let target = *start + Duration::from_micros(t_us);
                let now = Instant::now();
                if target > now {
                    std::thread::sleep(target - now);
                }
            }
        }
    }
}
