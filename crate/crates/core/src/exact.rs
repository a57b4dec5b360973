//! Exact solutions of the dispersionless shallow water equations used as
//! references: the flat-bottom Riemann problem (including dry beds and
//! vacuum generation), the oscillating lake in a parabolic bowl, and the
//! lake at rest.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannData<T> {
    pub h_left: T,
    pub u_left: T,
    pub h_right: T,
    pub u_right: T,
    pub g: T,
}

impl<T: Real> RiemannData<T> {
    pub fn new(h_left: T, u_left: T, h_right: T, u_right: T, g: T) -> Self {
        RiemannData {
            h_left,
            u_left,
            h_right,
            u_right,
            g,
        }
    }

    pub fn a_left(&self) -> T {
        (self.g * self.h_left).sqrt()
    }

    pub fn a_right(&self) -> T {
        (self.g * self.h_right).sqrt()
    }

    /// Reflection `x -> -x`: swaps the states and flips velocities.
    pub fn mirrored(&self) -> Self {
        RiemannData::new(self.h_right, -self.u_right, self.h_left, -self.u_left, self.g)
    }

    fn validate(&self) -> Result<()> {
        if !(self.h_left >= T::zero() && self.h_right >= T::zero()) {
            return Err(Error::InvalidState("Riemann heights must be nonnegative".into()));
        }
        if !(self.g > T::zero()) {
            return Err(Error::InvalidState("g must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Wave<T> {
    Rarefaction { head: T, tail: T },
    Shock { speed: T },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveKind {
    AllDry,
    SingleRarefactionDry,
    TwoRarefactionsVacuum,
    TwoRarefactions,
    RarefactionShock,
    ShockRarefaction,
    TwoShocks,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WaveStructure<T> {
    AllDry,
    /// Left rarefaction running into a dry bed on the right.
    DryRight { head: T, front: T },
    /// Mirror image of `DryRight`; speeds are in the physical frame.
    DryLeft { head: T, front: T },
    /// Two rarefactions separated by a growing dry region.
    Vacuum {
        left_head: T,
        left_front: T,
        right_front: T,
        right_head: T,
    },
    TwoWave {
        h_star: T,
        u_star: T,
        left: Wave<T>,
        right: Wave<T>,
    },
}

impl<T: Real> WaveStructure<T> {
    pub fn kind(&self) -> WaveKind {
        match self {
            WaveStructure::AllDry => WaveKind::AllDry,
            WaveStructure::DryRight { .. } | WaveStructure::DryLeft { .. } => WaveKind::SingleRarefactionDry,
            WaveStructure::Vacuum { .. } => WaveKind::TwoRarefactionsVacuum,
            WaveStructure::TwoWave { left, right, .. } => match (left, right) {
                (Wave::Rarefaction { .. }, Wave::Rarefaction { .. }) => WaveKind::TwoRarefactions,
                (Wave::Rarefaction { .. }, Wave::Shock { .. }) => WaveKind::RarefactionShock,
                (Wave::Shock { .. }, Wave::Rarefaction { .. }) => WaveKind::ShockRarefaction,
                (Wave::Shock { .. }, Wave::Shock { .. }) => WaveKind::TwoShocks,
            },
        }
    }

    pub fn star(&self) -> Option<(T, T)> {
        match *self {
            WaveStructure::TwoWave { h_star, u_star, .. } => Some((h_star, u_star)),
            _ => None,
        }
    }

    pub fn right_shock_speed(&self) -> Option<T> {
        match *self {
            WaveStructure::TwoWave {
                right: Wave::Shock { speed },
                ..
            } => Some(speed),
            _ => None,
        }
    }

    pub fn left_shock_speed(&self) -> Option<T> {
        match *self {
            WaveStructure::TwoWave {
                left: Wave::Shock { speed },
                ..
            } => Some(speed),
            _ => None,
        }
    }
}

/// Depth function of one side: rarefaction branch for `h <= h_side`,
/// shock branch otherwise. Returns (value, derivative).
pub fn depth_function<T: Real>(h: T, h_side: T, g: T) -> (T, T) {
    if h <= h_side {
        let a = (g * h).sqrt();
        let value = T::lit(2.0) * (a - (g * h_side).sqrt());
        let slope = if h > T::zero() { (g / h).sqrt() } else { T::infinity() };
        (value, slope)
    } else {
        let q = (g * (h + h_side) / (T::lit(2.0) * h * h_side)).sqrt();
        let value = (h - h_side) * q;
        let slope = q - (h - h_side) * g / (T::lit(4.0) * q * h * h);
        (value, slope)
    }
}

fn star_residual<T: Real>(d: &RiemannData<T>, h: T) -> (T, T) {
    let (fl, dl) = depth_function(h, d.h_left, d.g);
    let (fr, dr) = depth_function(h, d.h_right, d.g);
    (fl + fr + d.u_right - d.u_left, dl + dr)
}

fn is_vacuum<T: Real>(d: &RiemannData<T>) -> bool {
    T::lit(2.0) * (d.a_left() + d.a_right()) <= d.u_right - d.u_left
}

/// Star state of a two-wave solution by safeguarded Newton iteration on the
/// (monotone) depth function, with bisection whenever Newton leaves the bracket.
pub fn star_state<T: Real>(d: &RiemannData<T>) -> Result<(T, T)> {
    d.validate()?;
    if d.h_left == T::zero() || d.h_right == T::zero() || is_vacuum(d) {
        return Err(Error::Validation(
            "star state requires wet data without vacuum generation".into(),
        ));
    }
    let two = T::lit(2.0);
    let (al, ar) = (d.a_left(), d.a_right());
    let guess = {
        let c = (al + ar) / two - (d.u_right - d.u_left) / T::lit(4.0);
        c * c / d.g
    };
    let mut lo = T::zero();
    let mut hi = d.h_left.max(d.h_right).max(guess).max(T::min_positive_value()) * two;
    let mut grow = 0;
    while star_residual(d, hi).0 <= T::zero() {
        lo = hi;
        hi = hi * two;
        grow += 1;
        if grow > 200 {
            return Err(Error::RootFinding("could not bracket the star depth".into()));
        }
    }
    let mut h = if guess > lo && guess < hi { guess } else { (lo + hi) / two };
    let tiny = T::epsilon() * T::lit(4.0);
    let finish = |h: T| {
        let (fl, _) = depth_function(h, d.h_left, d.g);
        let (fr, _) = depth_function(h, d.h_right, d.g);
        (h, (d.u_left + d.u_right) / two + (fr - fl) / two)
    };
    for _ in 0..200 {
        let (f, df) = star_residual(d, h);
        if f == T::zero() {
            return Ok(finish(h));
        }
        if f < T::zero() {
            lo = h;
        } else {
            hi = h;
        }
        let mut next = h - f / df;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = (lo + hi) / two;
        }
        let done = (next - h).abs() <= tiny * h || (hi - lo) <= tiny * hi;
        h = next;
        if done {
            return Ok(finish(h));
        }
    }
    Err(Error::RootFinding("star depth iteration did not converge".into()))
}

pub fn classify<T: Real>(d: &RiemannData<T>) -> Result<WaveStructure<T>> {
    d.validate()?;
    let zero = T::zero();
    let two = T::lit(2.0);
    let (al, ar) = (d.a_left(), d.a_right());
    match (d.h_left > zero, d.h_right > zero) {
        (false, false) => Ok(WaveStructure::AllDry),
        (true, false) => Ok(WaveStructure::DryRight {
            head: d.u_left - al,
            front: d.u_left + two * al,
        }),
        (false, true) => match classify(&d.mirrored())? {
            WaveStructure::DryRight { head, front } => Ok(WaveStructure::DryLeft {
                head: -head,
                front: -front,
            }),
            _ => unreachable!("mirror of dry-left data is dry-right"),
        },
        (true, true) if is_vacuum(d) => Ok(WaveStructure::Vacuum {
            left_head: d.u_left - al,
            left_front: d.u_left + two * al,
            right_front: d.u_right - two * ar,
            right_head: d.u_right + ar,
        }),
        (true, true) => {
            let (hs, us) = star_state(d)?;
            let a_star = (d.g * hs).sqrt();
            let left = if hs <= d.h_left {
                Wave::Rarefaction {
                    head: d.u_left - al,
                    tail: us - a_star,
                }
            } else {
                let q = ((hs + d.h_left) * hs / (two * d.h_left * d.h_left)).sqrt();
                Wave::Shock { speed: d.u_left - al * q }
            };
            let right = if hs <= d.h_right {
                Wave::Rarefaction {
                    head: d.u_right + ar,
                    tail: us + a_star,
                }
            } else {
                let q = ((hs + d.h_right) * hs / (two * d.h_right * d.h_right)).sqrt();
                Wave::Shock { speed: d.u_right + ar * q }
            };
            Ok(WaveStructure::TwoWave {
                h_star: hs,
                u_star: us,
                left,
                right,
            })
        }
    }
}

/// Left-going fan through the state (h, u) on the left.
fn left_fan<T: Real>(d: &RiemannData<T>, xi: T) -> (T, T) {
    let three = T::lit(3.0);
    let two = T::lit(2.0);
    let a = ((d.u_left + two * d.a_left() - xi) / three).max(T::zero());
    ((a * a) / d.g, (d.u_left + two * d.a_left() + two * xi) / three)
}

fn right_fan<T: Real>(d: &RiemannData<T>, xi: T) -> (T, T) {
    let three = T::lit(3.0);
    let two = T::lit(2.0);
    let a = ((-d.u_right + two * d.a_right() + xi) / three).max(T::zero());
    ((a * a) / d.g, (d.u_right - two * d.a_right() + two * xi) / three)
}

/// Height and velocity of the exact solution at `(x, t)`.
pub fn sample<T: Real>(d: &RiemannData<T>, s: &WaveStructure<T>, x: T, t: T) -> (T, T) {
    let (h, u) = if t <= T::zero() {
        if x < T::zero() {
            (d.h_left, d.u_left)
        } else {
            (d.h_right, d.u_right)
        }
    } else {
        sample_xi(d, s, x / t)
    };
    if h > T::zero() {
        (h, u)
    } else {
        (T::zero(), T::zero())
    }
}

fn sample_xi<T: Real>(d: &RiemannData<T>, s: &WaveStructure<T>, xi: T) -> (T, T) {
    let zero = (T::zero(), T::zero());
    match *s {
        WaveStructure::AllDry => zero,
        WaveStructure::DryRight { head, front } => {
            if xi <= head {
                (d.h_left, d.u_left)
            } else if xi < front {
                left_fan(d, xi)
            } else {
                zero
            }
        }
        WaveStructure::DryLeft { head, front } => {
            let m = d.mirrored();
            let (h, u) = sample_xi(&m, &WaveStructure::DryRight { head: -head, front: -front }, -xi);
            (h, -u)
        }
        WaveStructure::Vacuum {
            left_head,
            left_front,
            right_front,
            right_head,
        } => {
            if xi <= left_head {
                (d.h_left, d.u_left)
            } else if xi < left_front {
                left_fan(d, xi)
            } else if xi <= right_front {
                zero
            } else if xi < right_head {
                right_fan(d, xi)
            } else {
                (d.h_right, d.u_right)
            }
        }
        WaveStructure::TwoWave {
            h_star,
            u_star,
            left,
            right,
        } => {
            if xi <= u_star {
                match left {
                    Wave::Shock { speed } => {
                        if xi < speed {
                            (d.h_left, d.u_left)
                        } else {
                            (h_star, u_star)
                        }
                    }
                    Wave::Rarefaction { head, tail } => {
                        if xi <= head {
                            (d.h_left, d.u_left)
                        } else if xi < tail {
                            left_fan(d, xi)
                        } else {
                            (h_star, u_star)
                        }
                    }
                }
            } else {
                match right {
                    Wave::Shock { speed } => {
                        if xi > speed {
                            (d.h_right, d.u_right)
                        } else {
                            (h_star, u_star)
                        }
                    }
                    Wave::Rarefaction { head, tail } => {
                        if xi >= head {
                            (d.h_right, d.u_right)
                        } else if xi > tail {
                            right_fan(d, xi)
                        } else {
                            (h_star, u_star)
                        }
                    }
                }
            }
        }
    }
}

/// Classified Riemann problem that can be sampled repeatedly.
#[derive(Debug, Clone, Copy)]
pub struct RiemannSolution<T> {
    pub data: RiemannData<T>,
    pub structure: WaveStructure<T>,
}

impl<T: Real> RiemannSolution<T> {
    pub fn new(data: RiemannData<T>) -> Result<Self> {
        Ok(RiemannSolution {
            structure: classify(&data)?,
            data,
        })
    }

    pub fn sample(&self, x: T, t: T) -> (T, T) {
        sample(&self.data, &self.structure, x, t)
    }
}

/// Oscillating lake in the bowl `b = x^2` (g = 1). Returns (h, eta).
pub fn thacker_exact<T: Real>(x: T, t: T) -> (T, T) {
    let s2 = T::SQRT_2();
    let b = x * x;
    let wet = T::lit(0.75) - T::lit(0.25) * (T::lit(2.0) * s2 * t).cos() - s2 * x * (s2 * t).cos();
    let eta = wet.max(b);
    ((eta - b).max(T::zero()), eta)
}

/// Spatially uniform velocity of the oscillating lake, `sin(sqrt(2) t)`.
pub fn thacker_velocity<T: Real>(t: T) -> T {
    (T::SQRT_2() * t).sin()
}

/// Initial free surface of the oscillating lake.
pub fn thacker_initial_surface<T: Real>(x: T) -> T {
    (T::lit(0.5) - T::SQRT_2() * x).max(x * x)
}

/// Period of the oscillating lake.
pub fn thacker_period<T: Real>() -> T {
    T::SQRT_2() * T::PI()
}

/// Steady state `h = (1 - b)_+`, `u = 0`.
pub fn lake_at_rest_exact<T: Real>(x: T, b: impl Fn(T) -> T) -> (T, T) {
    ((T::one() - b(x)).max(T::zero()), T::zero())
}
