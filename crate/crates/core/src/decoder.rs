//! Exact simulation of the weighings and recovery of the fake set.
//!
//! With genuine weight `W` and fake weight `W(1 + ε)`, weighing `j` exceeds
//! its all-genuine total by `εW · Σ_{r∈K} rows[j][r]`, i.e. by `εW` times the
//! subset sum of the fake set `K`. The unknown factor `εW` cancels in the
//! direction of the deviation vector, which a feasible scheme maps back to `K`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::direction::{canonical_direction, Direction, IntVector};
use crate::error::{MintsError, Result};
use crate::feasibility::{all_subset_sums, verify_scheme};
use crate::scheme::{Scheme, SubsetMask};

/// Exact rational number, always in lowest terms with a positive denominator.
/// Written as `"num/den"`, or `"num"` when the denominator is one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<i128>);

impl Rational {
    pub fn new(numer: i128, denom: i128) -> Result<Self> {
        if denom == 0 {
            return Err(MintsError::Parse("zero denominator".into()));
        }
        if (numer == i128::MIN || denom == i128::MIN) && numer.gcd(&denom) == 1 {
            return Err(MintsError::overflow("rational normalization"));
        }
        Ok(Rational(Ratio::new(numer, denom)))
    }

    pub fn integer(n: i128) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn zero() -> Self {
        Rational(Ratio::zero())
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        *self.0.numer() > 0
    }

    pub fn checked_add(&self, other: &Rational) -> Result<Rational> {
        self.0
            .checked_add(&other.0)
            .map(Rational)
            .ok_or_else(|| MintsError::overflow("rational addition"))
    }

    pub fn checked_sub(&self, other: &Rational) -> Result<Rational> {
        self.0
            .checked_sub(&other.0)
            .map(Rational)
            .ok_or_else(|| MintsError::overflow("rational subtraction"))
    }

    pub fn checked_mul(&self, other: &Rational) -> Result<Rational> {
        self.0
            .checked_mul(&other.0)
            .map(Rational)
            .ok_or_else(|| MintsError::overflow("rational multiplication"))
    }
}

impl From<i128> for Rational {
    fn from(n: i128) -> Self {
        Rational::integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = MintsError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || MintsError::Parse(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => Rational::new(
                n.trim().parse().map_err(|_| bad())?,
                d.trim().parse().map_err(|_| bad())?,
            ),
            None => Ok(Rational::integer(s.parse().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Weighing readings, as exchanged in JSON: `{"weighings": ["3", "2"]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observations {
    pub weighings: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeOutcome {
    AllGenuine,
    FakeSet(SubsetMask),
    Inconsistent(String),
}

/// Totals shown by the machine for each weighing when the mints in `fake`
/// make coins weighing `genuine_weight · (1 + epsilon)`.
pub fn simulate_weighings(
    scheme: &Scheme,
    genuine_weight: Rational,
    epsilon: Rational,
    fake: SubsetMask,
) -> Result<Vec<Rational>> {
    if !genuine_weight.is_positive() {
        return Err(MintsError::Config("genuine weight must be positive".into()));
    }
    if !fake.fits(scheme.n_mints()) {
        return Err(MintsError::Config(format!(
            "fake set {fake} refers to mints beyond {}",
            scheme.n_mints()
        )));
    }
    if epsilon.is_zero() && !fake.is_empty() {
        return Err(MintsError::Config(
            "fake coins need a nonzero deviation".into(),
        ));
    }
    let fake_weight = genuine_weight.checked_mul(&Rational::integer(1).checked_add(&epsilon)?)?;
    scheme
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .try_fold(Rational::zero(), |total, (r, &count)| {
                    let coin = if fake.contains(r) {
                        fake_weight
                    } else {
                        genuine_weight
                    };
                    total.checked_add(&coin.checked_mul(&Rational::integer(i128::from(count)))?)
                })
        })
        .collect()
}

/// Direction of every non-empty subset sum, mapped back to its subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioTable {
    entries: BTreeMap<Direction, SubsetMask>,
}

impl RatioTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, d: &Direction) -> Option<SubsetMask> {
        self.entries.get(d).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Direction, SubsetMask)> {
        self.entries.iter().map(|(d, &m)| (d, m))
    }
}

fn infeasible(scheme: &Scheme) -> Result<Option<MintsError>> {
    let report = verify_scheme(scheme)?;
    Ok(report
        .witness
        .map(|(a, b)| MintsError::InfeasibleScheme(a.to_string(), b.to_string())))
}

pub fn ratio_table(scheme: &Scheme) -> Result<RatioTable> {
    if let Some(e) = infeasible(scheme)? {
        return Err(e);
    }
    let sums = all_subset_sums(scheme)?;
    let entries = sums
        .iter()
        .enumerate()
        .skip(1)
        .map(|(mask, s)| Ok((canonical_direction(s)?, SubsetMask(mask as u64))))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(RatioTable { entries })
}

/// Recovers the fake set from the observed weighing totals.
pub fn decode(
    scheme: &Scheme,
    genuine_weight: Rational,
    observed: &[Rational],
) -> Result<DecodeOutcome> {
    let table = ratio_table(scheme)?;
    decode_with_table(scheme, &table, genuine_weight, observed)
}

/// [`decode`] against a table built once for `scheme`.
pub fn decode_with_table(
    scheme: &Scheme,
    table: &RatioTable,
    genuine_weight: Rational,
    observed: &[Rational],
) -> Result<DecodeOutcome> {
    if !genuine_weight.is_positive() {
        return Err(MintsError::Config("genuine weight must be positive".into()));
    }
    if observed.len() != scheme.n_rows() {
        return Err(MintsError::Config(format!(
            "expected {} observed weighings, got {}",
            scheme.n_rows(),
            observed.len()
        )));
    }
    let deviations = scheme
        .rows()
        .iter()
        .zip(observed)
        .map(|(row, obs)| {
            let coins = row
                .iter()
                .try_fold(0i128, |acc, &x| acc.checked_add(i128::from(x)));
            let coins = coins.ok_or_else(|| MintsError::overflow("coin count"))?;
            obs.checked_sub(&genuine_weight.checked_mul(&Rational::integer(coins))?)
        })
        .collect::<Result<Vec<_>>>()?;
    if deviations.iter().all(Rational::is_zero) {
        return Ok(DecodeOutcome::AllGenuine);
    }
    let lcm = deviations
        .iter()
        .try_fold(1i128, |l, d| {
            let g = l.gcd(&d.denom());
            (l / g).checked_mul(d.denom())
        })
        .ok_or_else(|| MintsError::overflow("denominator lcm"))?;
    let scaled = deviations
        .iter()
        .map(|d| {
            d.numer()
                .checked_mul(lcm / d.denom())
                .ok_or_else(|| MintsError::overflow("deviation scaling"))
        })
        .collect::<Result<Vec<_>>>()?;
    let direction = canonical_direction(&IntVector(scaled))?;
    Ok(match table.get(&direction) {
        Some(mask) => DecodeOutcome::FakeSet(mask),
        None => DecodeOutcome::Inconsistent(format!(
            "unknown direction {direction}: no set of fake mints produces this deviation"
        )),
    })
}
